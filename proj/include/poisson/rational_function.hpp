#pragma once

#include "poisson/polynomial.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace poisson {

/// Quotient of polynomials, kept unreduced (no multivariate gcd).
///
/// The denominator is stored as a product of powers of monic "base"
/// polynomials. Bases come from the denominators the caller supplied, so
/// derivatives and sums grow exponents instead of squaring the denominator.
/// Whenever a base divides the numerator exactly it is cancelled. Equality
/// is decided by cross-multiplication.
class RationalFunction {
 public:
  using Factor = std::pair<Polynomial, int>;

  explicit RationalFunction(int nvars = 0) : num_(nvars) {}

  // Implicit: polynomials coerce into the rational-function ring.
  RationalFunction(Polynomial num) : num_(std::move(num)) {}  // NOLINT(google-explicit-constructor)

  RationalFunction(Polynomial num, const Polynomial& den) : num_(std::move(num)) {
    if (den.nvars() != num_.nvars()) throw std::invalid_argument("numerator and denominator rings differ");
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    multiply_denominator(den, 1);
    normalize();
  }

  static RationalFunction constant(int nvars, const Rational& c) { return {Polynomial::constant(nvars, c)}; }

  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  const Polynomial& numerator() const { return num_; }
  const std::vector<Factor>& denominator_factors() const { return den_; }

  bool is_polynomial() const { return den_.empty(); }

  Polynomial denominator() const {
    Polynomial d = Polynomial::constant(nvars(), 1);
    for (const auto& [b, e] : den_) d *= b.pow(static_cast<unsigned>(e));
    return d;
  }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return combine(a, b, false);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return combine(a, b, true);
  }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    RationalFunction r(a.num_ * b.num_);
    if (r.num_.is_zero()) return r;
    r.den_ = a.den_;
    for (const auto& [base, e] : b.den_) r.add_base(base, e);
    r.normalize();
    return r;
  }

  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("division by zero rational function");
    RationalFunction inv(b.denominator(), b.num_);
    return a * inv;
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  RationalFunction derivative(int var) const {
    if (den_.empty()) return {num_.derivative(var)};
    // d(a / prod b_i^e_i) = (a' prod b_i - a sum_i e_i b_i' prod_{j!=i} b_j) / prod b_i^(e_i+1)
    Polynomial all = Polynomial::constant(nvars(), 1);
    for (const auto& [b, e] : den_) all *= b;
    Polynomial top = num_.derivative(var) * all;
    for (std::size_t i = 0; i < den_.size(); ++i) {
      Polynomial db = den_[i].first.derivative(var);
      if (db.is_zero()) continue;
      Polynomial others = Polynomial::constant(nvars(), den_[i].second);
      for (std::size_t j = 0; j < den_.size(); ++j) {
        if (j != i) others *= den_[j].first;
      }
      top -= num_ * db * others;
    }
    RationalFunction r(std::move(top));
    if (r.num_.is_zero()) return r;
    r.den_ = den_;
    for (auto& f : r.den_) f.second += 1;
    r.normalize();
    return r;
  }

  /// num(a)*den(b) - num(b)*den(a) == 0.
  friend bool rf_equal(const RationalFunction& a, const RationalFunction& b) {
    if (a.nvars() != b.nvars()) return false;
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return (a.num_ * b.denominator() - b.num_ * a.denominator()).is_zero();
  }

  bool operator==(const RationalFunction& o) const { return rf_equal(*this, o); }

  RationalFunction compose(const std::vector<Polynomial>& subs) const {
    return {num_.compose(subs), denominator().compose(subs)};
  }

  RationalFunction extend(int nvars) const {
    RationalFunction r(num_.extend(nvars));
    for (const auto& [b, e] : den_) r.den_.emplace_back(b.extend(nvars), e);
    return r;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (den_.empty()) return num_.to_string(names);
    return "(" + num_.to_string(names) + ")/(" + denominator().to_string(names) + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const RationalFunction& r) { return os << r.to_string(); }

 private:
  static RationalFunction combine(const RationalFunction& a, const RationalFunction& b, bool subtract) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("rational functions live in different rings");
    if (a.den_ == b.den_) {
      RationalFunction r(subtract ? a.num_ - b.num_ : a.num_ + b.num_);
      if (!r.num_.is_zero()) {
        r.den_ = a.den_;
        r.normalize();
      }
      return r;
    }
    // Common denominator: every base to its maximal exponent.
    std::vector<Factor> common = a.den_;
    for (const auto& [base, e] : b.den_) {
      auto it = std::find_if(common.begin(), common.end(), [&](const Factor& f) { return f.first == base; });
      if (it == common.end()) {
        common.emplace_back(base, e);
      } else {
        it->second = std::max(it->second, e);
      }
    }
    auto lift = [&](const RationalFunction& x) {
      Polynomial n = x.num_;
      for (const auto& [base, e] : common) {
        auto it = std::find_if(x.den_.begin(), x.den_.end(), [&](const Factor& f) { return f.first == base; });
        const int have = it == x.den_.end() ? 0 : it->second;
        if (e > have) n *= base.pow(static_cast<unsigned>(e - have));
      }
      return n;
    };
    Polynomial an = lift(a);
    Polynomial bn = lift(b);
    RationalFunction r(subtract ? an - bn : an + bn);
    if (!r.num_.is_zero()) {
      r.den_ = std::move(common);
      r.normalize();
    }
    return r;
  }

  /// Makes `den` monic, folds its leading coefficient into the numerator and
  /// records it as a base.
  void multiply_denominator(const Polynomial& den, int e) {
    if (den.is_constant()) {
      Rational c = den.constant_term();
      Rational s = 1;
      for (int i = 0; i < e; ++i) s *= c;
      num_ *= Rational(1) / s;
      return;
    }
    const Rational lc = den.leading_term().second;
    Polynomial monic = den * (Rational(1) / lc);
    Rational s = 1;
    for (int i = 0; i < e; ++i) s *= lc;
    num_ *= Rational(1) / s;
    add_base(monic, e);
  }

  void add_base(const Polynomial& monic, int e) {
    for (auto& f : den_) {
      if (f.first == monic) {
        f.second += e;
        return;
      }
    }
    den_.emplace_back(monic, e);
  }

  void normalize() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto& [base, e] : den_) {
      while (e > 0) {
        auto q = exact_divide(num_, base);
        if (!q) break;
        num_ = std::move(*q);
        --e;
      }
    }
    std::erase_if(den_, [](const Factor& f) { return f.second == 0; });
  }

  Polynomial num_;
  std::vector<Factor> den_;
};

}  // namespace poisson
