#pragma once

#include "poisson/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poisson {

inline constexpr int kMaxVariables = 16;

/// Exponent vector of a monomial. Unused trailing slots stay zero, so the
/// lexicographic order of the whole array is the lexicographic order on the
/// first `nvars` exponents.
class Monomial {
 public:
  Monomial() { exps_.fill(0); }

  static Monomial from_exponents(std::span<const int> e) {
    if (e.size() > static_cast<std::size_t>(kMaxVariables)) {
      throw std::invalid_argument("too many variables in monomial");
    }
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0) throw std::invalid_argument("negative exponent");
      m.exps_[i] = e[i];
    }
    return m;
  }

  static Monomial unit(int var, int power = 1) {
    Monomial m;
    m.exps_.at(static_cast<std::size_t>(var)) = power;
    return m;
  }

  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return exps_[static_cast<std::size_t>(i)]; }

  int total_degree() const {
    int d = 0;
    for (int e : exps_) d += e;
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial m;
    for (std::size_t i = 0; i < exps_.size(); ++i) m.exps_[i] = exps_[i] + o.exps_[i];
    return m;
  }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > o.exps_[i]) return false;
    }
    return true;
  }

  /// Precondition: `o.divides(*this)`.
  Monomial operator/(const Monomial& o) const {
    Monomial m;
    for (std::size_t i = 0; i < exps_.size(); ++i) m.exps_[i] = exps_[i] - o.exps_[i];
    return m;
  }

  std::vector<int> exponents(int nvars) const {
    return {exps_.begin(), exps_.begin() + nvars};
  }

  auto operator<=>(const Monomial&) const = default;

 private:
  std::array<std::int32_t, kMaxVariables> exps_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// No stored coefficient is ever zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) { check_nvars(nvars); }

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
  }

  static Polynomial variable(int nvars, int var) {
    if (var < 0 || var >= nvars) throw std::out_of_range("variable index out of range");
    Polynomial p(nvars);
    p.terms_.emplace(Monomial::unit(var), Rational(1));
    return p;
  }

  static Polynomial term(int nvars, const Monomial& m, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
  }

  Rational constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  /// Largest monomial in lexicographic order. Precondition: nonzero.
  const std::pair<const Monomial, Rational>& leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *terms_.rbegin();
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    }
    return r;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(nvars_, 1);
    Polynomial base = *this;
    while (e != 0) {
      if ((e & 1U) != 0) result *= base;
      e >>= 1U;
      if (e != 0) base *= base;
    }
    return result;
  }

  Polynomial derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("derivative variable out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      const int e = m[var];
      if (e == 0) continue;
      Monomial dm = m;
      dm[var] = e - 1;
      r.add_term(dm, c * e);
    }
    return r;
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != static_cast<std::size_t>(nvars_)) {
      throw std::invalid_argument("evaluation point has wrong dimension");
    }
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < nvars_; ++i) {
        for (int k = 0; k < m[i]; ++k) t *= point[static_cast<std::size_t>(i)];
      }
      sum += t;
    }
    return sum;
  }

  /// Substitutes variable i by `subs[i]`. All substitutes share one ring.
  Polynomial compose(const std::vector<Polynomial>& subs) const {
    if (subs.size() != static_cast<std::size_t>(nvars_)) {
      throw std::invalid_argument("compose needs one substitute per variable");
    }
    const int out_vars = subs.empty() ? 0 : subs.front().nvars();
    std::vector<std::vector<Polynomial>> powers(subs.size());
    Polynomial r(out_vars);
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(out_vars, c);
      for (int i = 0; i < nvars_; ++i) {
        const int e = m[i];
        if (e == 0) continue;
        auto& cache = powers[static_cast<std::size_t>(i)];
        if (cache.empty()) cache.push_back(constant(out_vars, 1));
        while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * subs[static_cast<std::size_t>(i)]);
        t *= cache[static_cast<std::size_t>(e)];
      }
      r += t;
    }
    return r;
  }

  /// Same polynomial viewed in a ring with more variables.
  Polynomial extend(int nvars) const {
    if (nvars < nvars_) throw std::invalid_argument("cannot shrink polynomial ring");
    Polynomial r(nvars);
    r.terms_ = terms_;
    return r;
  }

  /// Returns q with a == q*b when b divides a exactly, nullopt otherwise.
  /// Lex-leading-term division: if b | a then LT(b) | LT(remainder) at every step.
  friend std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    Polynomial q(a.nvars_);
    if (a.is_zero()) return q;
    const auto& [lm_b, lc_b] = b.leading_term();
    if (b.size() == 1) {
      for (const auto& [m, c] : a.terms_) {
        if (!lm_b.divides(m)) return std::nullopt;
        q.terms_.emplace_hint(q.terms_.end(), m / lm_b, c / lc_b);
      }
      return q;
    }
    Polynomial rem = a;
    while (!rem.is_zero()) {
      const auto& [lm_r, lc_r] = rem.leading_term();
      if (!lm_b.divides(lm_r)) return std::nullopt;
      const Monomial qm = lm_r / lm_b;
      const Rational qc = lc_r / lc_b;
      q.add_term(qm, qc);
      for (const auto& [m, c] : b.terms_) rem.add_term(qm * m, -qc * c);
    }
    return q;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool unit_monomial = m == Monomial{};
      if (mag != 1 || unit_monomial) {
        os << mag.get_str();
        if (!unit_monomial) os << "*";
      }
      bool first_factor = true;
      for (int i = 0; i < nvars_; ++i) {
        if (m[i] == 0) continue;
        if (!first_factor) os << "*";
        first_factor = false;
        os << variable_name(names, i);
        if (m[i] > 1) os << "^" << m[i];
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

 private:
  static std::string variable_name(const std::vector<std::string>& names, int i) {
    if (static_cast<std::size_t>(i) < names.size()) return names[static_cast<std::size_t>(i)];
    static constexpr std::array<const char*, 3> xyz{"x", "y", "z"};
    if (i < 3) return xyz[static_cast<std::size_t>(i)];
    return "v" + std::to_string(i);
  }

  static void check_nvars(int n) {
    if (n < 0 || n > kMaxVariables) throw std::invalid_argument("unsupported number of variables");
  }

  void check_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomials live in different rings");
  }

  int nvars_;
  TermMap terms_;
};

}  // namespace poisson
