#pragma once

#include "poisson/rational.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace poisson {

/// Dense square matrix of rationals acting on coordinates.
class LinearMap {
 public:
  explicit LinearMap(int n = 0) : n_(n), a_(static_cast<std::size_t>(n * n)) {}

  LinearMap(std::initializer_list<std::initializer_list<Rational>> rows) : LinearMap(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("linear map must be square");
      int j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static LinearMap identity(int n) {
    LinearMap m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static LinearMap diagonal(const std::vector<Rational>& d) {
    LinearMap m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }

  int dim() const { return n_; }
  Rational& operator()(int i, int j) { return a_[idx(i, j)]; }
  const Rational& operator()(int i, int j) const { return a_[idx(i, j)]; }

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("linear map dimensions differ");
    LinearMap c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  bool operator==(const LinearMap& o) const { return n_ == o.n_ && a_ == o.a_; }

  /// Gauss-Jordan over Q. Throws std::domain_error when singular.
  LinearMap inverse() const {
    LinearMap m = *this;
    LinearMap inv = identity(n_);
    for (int c = 0; c < n_; ++c) {
      int p = c;
      while (p < n_ && m(p, c) == 0) ++p;
      if (p == n_) throw std::domain_error("singular linear map");
      if (p != c) {
        for (int j = 0; j < n_; ++j) {
          std::swap(m(p, j), m(c, j));
          std::swap(inv(p, j), inv(c, j));
        }
      }
      const Rational s = Rational(1) / m(c, c);
      for (int j = 0; j < n_; ++j) {
        m(c, j) *= s;
        inv(c, j) *= s;
      }
      for (int r = 0; r < n_; ++r) {
        if (r == c || m(r, c) == 0) continue;
        const Rational f = m(r, c);
        for (int j = 0; j < n_; ++j) {
          m(r, j) -= f * m(c, j);
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("linear map index out of range");
    return static_cast<std::size_t>(i * n_ + j);
  }

  int n_;
  std::vector<Rational> a_;
};

}  // namespace poisson
