#pragma once

#include "poisson/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace poisson {

/// Sparse matrix of exact rationals, stored row-wise.
class ExactMatrix {
 public:
  using Row = std::map<int, Rational>;

  ExactMatrix(int rows = 0, int cols = 0) : cols_(cols), rows_(static_cast<std::size_t>(rows)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
  }

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  const Row& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }

  Rational at(int i, int j) const {
    const Row& r = row(i);
    auto it = r.find(j);
    return it == r.end() ? Rational(0) : it->second;
  }

  void add(int i, int j, const Rational& v) {
    if (j < 0 || j >= cols_) throw std::out_of_range("matrix column out of range");
    if (v == 0) return;
    Row& r = rows_.at(static_cast<std::size_t>(i));
    Rational& slot = r[j];
    slot += v;
    if (slot == 0) r.erase(j);
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  bool is_zero() const { return nonzeros() == 0; }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows()) throw std::invalid_argument("matrix shapes do not compose");
    ExactMatrix c(a.rows(), b.cols_);
    for (int i = 0; i < a.rows(); ++i)
      for (const auto& [k, v] : a.row(i))
        for (const auto& [j, w] : b.row(k)) c.add(i, j, v * w);
    return c;
  }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    if (x.size() != static_cast<std::size_t>(cols_)) throw std::invalid_argument("vector length does not match columns");
    std::vector<Rational> y(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const auto& [j, v] : rows_[i]) y[i] += v * x[static_cast<std::size_t>(j)];
    return y;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows());
    for (int i = 0; i < rows(); ++i)
      for (const auto& [j, v] : row(i)) t.add(j, i, v);
    return t;
  }

  bool operator==(const ExactMatrix& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }

 private:
  int cols_;
  std::vector<Row> rows_;
};

enum class Elimination {
  bareiss,          // one-step fraction-free, exact division by the previous pivot
  content_removal,  // fraction-free row operations, rows divided by their gcd
};

inline const char* to_string(Elimination e) { return e == Elimination::bareiss ? "bareiss" : "content"; }

struct Echelon {
  int rank = 0;
  std::vector<int> pivot_cols;
  std::vector<std::vector<Integer>> rows;  // `rank` integer rows in echelon form
};

namespace detail {

inline std::vector<std::vector<Integer>> clear_denominators(const ExactMatrix& m) {
  std::vector<std::vector<Integer>> a(static_cast<std::size_t>(m.rows()), std::vector<Integer>(static_cast<std::size_t>(m.cols())));
  for (int i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (const auto& [j, v] : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& [j, v] : m.row(i)) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.get_num() * (l / v.get_den());
  }
  return a;
}

inline void remove_content(std::vector<Integer>& row, std::size_t from) {
  Integer g = 0;
  for (std::size_t j = from; j < row.size(); ++j) {
    if (row[j] == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[j].get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (std::size_t j = from; j < row.size(); ++j)
    if (row[j] != 0) mpz_divexact(row[j].get_mpz_t(), row[j].get_mpz_t(), g.get_mpz_t());
}

}  // namespace detail

/// Row echelon form over the integers. The pivot in each column is the first
/// remaining row (in index order) with a nonzero entry.
inline Echelon echelon(const ExactMatrix& m, Elimination method = Elimination::content_removal) {
  auto a = detail::clear_denominators(m);
  const std::size_t nrows = a.size();
  const std::size_t ncols = static_cast<std::size_t>(m.cols());
  Echelon out;
  Integer prev = 1;
  Integer t;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && a[p][c] == 0) ++p;
    if (p == nrows) continue;
    if (p != r) std::swap(a[p], a[r]);
    const Integer& piv = a[r][c];
    for (std::size_t i = r + 1; i < nrows; ++i) {
      auto& ri = a[i];
      if (method == Elimination::content_removal) {
        if (ri[c] == 0) continue;
        const Integer f = ri[c];
        for (std::size_t j = c; j < ncols; ++j) {
          ri[j] *= piv;
          if (a[r][j] != 0) {
            t = f * a[r][j];
            ri[j] -= t;
          }
        }
        detail::remove_content(ri, c + 1);
      } else {
        const Integer f = ri[c];
        for (std::size_t j = c + 1; j < ncols; ++j) {
          // ri[j] = (piv * ri[j] - f * a[r][j]) / prev
          ri[j] *= piv;
          if (f != 0 && a[r][j] != 0) {
            t = f * a[r][j];
            ri[j] -= t;
          }
          if (prev != 1 && ri[j] != 0) mpz_divexact(ri[j].get_mpz_t(), ri[j].get_mpz_t(), prev.get_mpz_t());
        }
        ri[c] = 0;
      }
    }
    if (method == Elimination::bareiss) prev = piv;
    out.pivot_cols.push_back(static_cast<int>(c));
    ++r;
  }
  out.rank = static_cast<int>(r);
  a.resize(r);
  out.rows = std::move(a);
  return out;
}

struct RankKernel {
  int rank = 0;
  std::vector<std::vector<Rational>> kernel;
};

/// Kernel basis from an echelon form: one vector per free column, with that
/// column set to 1 and the other free columns set to 0.
inline std::vector<std::vector<Rational>> kernel_from_echelon(const Echelon& e, int ncols) {
  std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
  for (int c : e.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(ncols));
    v[static_cast<std::size_t>(free)] = 1;
    for (int k = e.rank - 1; k >= 0; --k) {
      const auto& row = e.rows[static_cast<std::size_t>(k)];
      const int pc = e.pivot_cols[static_cast<std::size_t>(k)];
      Rational s = 0;
      for (int j = pc + 1; j < ncols; ++j) {
        const auto& rj = row[static_cast<std::size_t>(j)];
        if (rj != 0 && v[static_cast<std::size_t>(j)] != 0) s += Rational(rj) * v[static_cast<std::size_t>(j)];
      }
      v[static_cast<std::size_t>(pc)] = -s / Rational(row[static_cast<std::size_t>(pc)]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline int rank(const ExactMatrix& m, Elimination method = Elimination::content_removal) {
  return echelon(m, method).rank;
}

inline RankKernel rank_kernel(const ExactMatrix& m, Elimination method = Elimination::content_removal) {
  const Echelon e = echelon(m, method);
  return {e.rank, kernel_from_echelon(e, m.cols())};
}

}  // namespace poisson
