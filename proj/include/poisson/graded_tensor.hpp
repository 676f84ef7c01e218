#pragma once

#include "poisson/polynomial.hpp"
#include "poisson/rational_function.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <string>
#include <vector>

namespace poisson {

enum class Variance { contravariant, covariant };

/// Index subsets of {0..n-1} are bitmasks; bit i set means index i present.
using Mask = std::uint32_t;

namespace subsets {

inline int size(Mask m) { return std::popcount(m); }

inline std::vector<int> indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1U) {
    if ((m & 1U) != 0) out.push_back(i);
  }
  return out;
}

inline Mask from_indices(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask{1} << static_cast<unsigned>(i);
  return m;
}

/// Sign of e_A ^ e_B for disjoint A, B: parity of pairs (a, b) with a > b.
inline int merge_sign(Mask a, Mask b) {
  int inversions = 0;
  for (int j : indices(b)) inversions += std::popcount(a >> static_cast<unsigned>(j + 1));
  return (inversions & 1) != 0 ? -1 : 1;
}

/// Number of elements of m strictly below index i.
inline int count_below(Mask m, int i) { return std::popcount(m & ((Mask{1} << static_cast<unsigned>(i)) - 1)); }

/// Ascending-lexicographic comparison of the sorted index lists.
inline bool lex_less(Mask a, Mask b) { return indices(a) < indices(b); }

/// All k-subsets of {0..n-1} in ascending lexicographic order.
inline std::vector<Mask> all_of_size(int n, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(from_indices(idx));
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace subsets

/// Homogeneous multivector field (contravariant) or differential form
/// (covariant) of a fixed degree on an n-dimensional coordinate space.
///
/// Coefficients live in a scalar ring (Polynomial or RationalFunction) whose
/// variable count may exceed n; the extra variables are parameters and are
/// never differentiated by the calculus operations. Negative degrees and
/// degrees above n denote the zero space.
template <class S, Variance V>
class GradedTensor {
 public:
  using Scalar = S;
  static constexpr Variance variance = V;

  GradedTensor() = default;

  GradedTensor(int dim, int degree, int nvars) : dim_(dim), degree_(degree), nvars_(nvars) {
    if (dim < 0 || dim > kMaxVariables) throw std::invalid_argument("unsupported ambient dimension");
    if (nvars < dim) throw std::invalid_argument("scalar ring has fewer variables than the ambient space");
  }

  static GradedTensor zero(int dim, int degree, int nvars) { return GradedTensor(dim, degree, nvars); }

  static GradedTensor scalar(int dim, const S& value) {
    GradedTensor t(dim, 0, value.nvars());
    t.add(0, value);
    return t;
  }

  /// coeff * e_{i1} ^ ... ^ e_{ik} for an arbitrary index sequence; the
  /// permutation parity is applied and repeated indices give zero.
  static GradedTensor basis(int dim, const std::vector<int>& indices, const S& coeff) {
    GradedTensor t(dim, static_cast<int>(indices.size()), coeff.nvars());
    Mask m = 0;
    int sgn = 1;
    for (int i : indices) {
      if (i < 0 || i >= dim) throw std::out_of_range("basis index out of range");
      const Mask bit = Mask{1} << static_cast<unsigned>(i);
      if ((m & bit) != 0) return t;
      // moving e_i left past the already placed larger indices
      if ((subsets::size(m) - subsets::count_below(m, i)) % 2 != 0) sgn = -sgn;
      m |= bit;
    }
    t.add(m, sgn > 0 ? coeff : -coeff);
    return t;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int nvars() const { return nvars_; }
  const std::map<Mask, S>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  S component(Mask m) const {
    auto it = comps_.find(m);
    return it == comps_.end() ? S::constant(nvars_, 0) : it->second;
  }

  S component(const std::vector<int>& sorted_indices) const { return component(subsets::from_indices(sorted_indices)); }

  /// Value of a degree-0 tensor.
  S as_scalar() const {
    if (degree_ != 0) throw std::logic_error("tensor is not of degree 0");
    return component(Mask{0});
  }

  void add(Mask m, const S& c) {
    if (subsets::size(m) != degree_) throw std::invalid_argument("component subset has wrong size");
    if (c.is_zero()) return;
    auto [it, inserted] = comps_.try_emplace(m, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) comps_.erase(it);
    }
  }

  GradedTensor& operator+=(const GradedTensor& o) {
    if (!check_compatible(o)) return *this;
    for (const auto& [m, c] : o.comps_) add(m, c);
    return *this;
  }

  GradedTensor& operator-=(const GradedTensor& o) {
    if (!check_compatible(o)) return *this;
    for (const auto& [m, c] : o.comps_) add(m, -c);
    return *this;
  }

  friend GradedTensor operator+(GradedTensor a, const GradedTensor& b) { return a += b; }
  friend GradedTensor operator-(GradedTensor a, const GradedTensor& b) { return a -= b; }

  GradedTensor operator-() const {
    GradedTensor r = *this;
    for (auto& [m, c] : r.comps_) c = -c;
    return r;
  }

  friend GradedTensor operator*(const S& s, const GradedTensor& t) {
    GradedTensor r(t.dim_, t.degree_, t.nvars_);
    for (const auto& [m, c] : t.comps_) r.add(m, s * c);
    return r;
  }

  friend GradedTensor operator*(const GradedTensor& t, const S& s) { return s * t; }

  friend GradedTensor operator*(const Rational& q, const GradedTensor& t) { return S::constant(t.nvars_, q) * t; }

  /// Exact equality; the zero tensor compares equal across degrees.
  bool operator==(const GradedTensor& o) const {
    if (dim_ != o.dim_) return false;
    if (is_zero() && o.is_zero()) return true;
    if (degree_ != o.degree_ || comps_.size() != o.comps_.size()) return false;
    for (const auto& [m, c] : comps_) {
      auto it = o.comps_.find(m);
      if (it == o.comps_.end() || !(it->second == c)) return false;
    }
    return true;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using T = std::decay_t<decltype(f(std::declval<const S&>()))>;
    GradedTensor<T, V> r(dim_, degree_, nvars_);
    for (const auto& [m, c] : comps_) r.add(m, f(c));
    return r;
  }

  /// Components in ascending-lexicographic subset order.
  std::vector<std::pair<Mask, S>> ordered_components() const {
    std::vector<std::pair<Mask, S>> out(comps_.begin(), comps_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return subsets::lex_less(a.first, b.first); });
    return out;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : ordered_components()) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.to_string(names) << ")";
      for (int i : subsets::indices(m)) {
        const std::string name = static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                 : i < 3 ? std::string(1, "xyz"[i])
                                         : "v" + std::to_string(i);
        os << (V == Variance::contravariant ? "*d_" : "*d") << name;
      }
    }
    return os.str();
  }

 private:
  // Returns false when `o` can be ignored (zero of another degree).
  bool check_compatible(const GradedTensor& o) {
    if (dim_ != o.dim_) throw std::invalid_argument("tensors have different ambient dimension");
    if (nvars_ != o.nvars_) throw std::invalid_argument("tensors have different coefficient rings");
    if (degree_ == o.degree_) return true;
    if (o.is_zero()) return false;
    if (!is_zero()) throw std::invalid_argument("adding tensors of different degree");
    degree_ = o.degree_;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const GradedTensor& t) { return os << t.to_string(); }

  int dim_ = 0;
  int degree_ = 0;
  int nvars_ = 0;
  std::map<Mask, S> comps_;
};

template <class S>
using Multivector = GradedTensor<S, Variance::contravariant>;

template <class S>
using DifferentialForm = GradedTensor<S, Variance::covariant>;

/// Coefficient-ring coercion, e.g. Polynomial -> RationalFunction.
template <class To, class From, Variance V>
GradedTensor<To, V> convert(const GradedTensor<From, V>& t) {
  return t.map_coefficients([](const From& c) { return To(c); });
}

}  // namespace poisson
