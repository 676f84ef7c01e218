#pragma once

#include "poisson/exact_matrix.hpp"
#include "poisson/lie_algebra.hpp"
#include "poisson/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace poisson {

// ---------------------------------------------------------------------------
// Graded slices

/// Exponent vectors of total degree d in n variables, graded-lex order:
/// x_0^d first, then lexicographically descending.
inline std::vector<Monomial> monomials_of_degree(int n, int d) {
  std::vector<Monomial> out;
  if (d < 0 || n < 1) return out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  // recursive descent on the first exponent
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n - 1) {
      e[static_cast<std::size_t>(var)] = left;
      out.push_back(Monomial::from_exponents(e));
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, d);
  return out;
}

/// Basis of (q-vectors) x (degree-d monomials), subset-major.
class SliceBasis {
 public:
  SliceBasis(int n, int q, int d) : n_(n), q_(q), d_(d) {
    subsets_ = subsets::all_of_size(n, q);
    monomials_ = monomials_of_degree(n, d);
    for (std::size_t i = 0; i < subsets_.size(); ++i) subset_index_[subsets_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < monomials_.size(); ++i) monomial_index_[monomials_[i]] = static_cast<int>(i);
  }

  int n() const { return n_; }
  int q() const { return q_; }
  int d() const { return d_; }
  int size() const { return static_cast<int>(subsets_.size() * monomials_.size()); }
  const std::vector<Mask>& subsets() const { return subsets_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  int index(Mask s, const Monomial& m) const {
    auto si = subset_index_.find(s);
    auto mi = monomial_index_.find(m);
    if (si == subset_index_.end() || mi == monomial_index_.end()) return -1;
    return si->second * static_cast<int>(monomials_.size()) + mi->second;
  }

  Mask subset_at(int idx) const { return subsets_[static_cast<std::size_t>(idx) / monomials_.size()]; }
  const Monomial& monomial_at(int idx) const { return monomials_[static_cast<std::size_t>(idx) % monomials_.size()]; }

  Multivector<Polynomial> element(int idx) const {
    Multivector<Polynomial> p(n_, q_, n_);
    p.add(subset_at(idx), Polynomial::term(n_, monomial_at(idx), 1));
    return p;
  }

  Multivector<Polynomial> vector_to_multivector(const std::vector<Rational>& coords) const {
    Multivector<Polynomial> p(n_, q_, n_);
    for (int i = 0; i < size(); ++i) {
      const Rational& c = coords[static_cast<std::size_t>(i)];
      if (c != 0) p.add(subset_at(i), Polynomial::term(n_, monomial_at(i), c));
    }
    return p;
  }

  /// Coordinates of p; throws if p has a component outside the slice.
  std::vector<Rational> coordinates(const Multivector<Polynomial>& p) const {
    std::vector<Rational> v(static_cast<std::size_t>(size()));
    if (p.is_zero()) return v;
    if (p.degree() != q_) throw std::logic_error("multivector degree differs from slice degree");
    for (const auto& [s, c] : p.components())
      for (const auto& [m, coeff] : c.terms()) {
        const int idx = index(s, m);
        if (idx < 0) throw std::logic_error("component leaves the graded slice");
        v[static_cast<std::size_t>(idx)] = coeff;
      }
    return v;
  }

 private:
  int n_, q_, d_;
  std::vector<Mask> subsets_;
  std::vector<Monomial> monomials_;
  std::map<Mask, int> subset_index_;
  std::map<Monomial, int> monomial_index_;
};

// ---------------------------------------------------------------------------
// Differentials

/// Matrix of d_pi = [pi, .] from slice (q, d) to slice (q+1, d).
inline ExactMatrix lichnerowicz_matrix(const Multivector<Polynomial>& pi, int q, int d) {
  const int n = pi.dim();
  if (q < 0 || q > n || d < 0) return ExactMatrix(0, 0);
  const SliceBasis src(n, q, d);
  const SliceBasis dst(n, q + 1, d);
  ExactMatrix m(dst.size(), src.size());
  for (int j = 0; j < src.size(); ++j) {
    const auto image = schouten_bracket(pi, src.element(j));
    if (image.is_zero()) continue;
    const auto col = dst.coordinates(image);
    for (int i = 0; i < dst.size(); ++i)
      if (col[static_cast<std::size_t>(i)] != 0) m.add(i, j, col[static_cast<std::size_t>(i)]);
  }
  return m;
}

/// Chevalley-Eilenberg differential on Hom(wedge^q g, S^d g) with the
/// coadjoint-derivation action e_i . x_k = sum_m c_ik^m x_m, in the same
/// basis ordering as lichnerowicz_matrix. Uses only structure constants and
/// raw exponent vectors.
inline ExactMatrix ce_matrix(const LieAlgebra& g, int q, int d) {
  const int n = g.dim;
  if (q < 0 || q > n || d < 0) return ExactMatrix(0, 0);

  // tuples and monomials, enumerated independently of SliceBasis
  auto tuples = [n](int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
      }
      for (int i = start; i < n; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  };
  std::vector<std::vector<int>> monos;
  {
    std::vector<int> e(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int var, int left) -> void {
      if (var == n - 1) {
        e[static_cast<std::size_t>(var)] = left;
        monos.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[static_cast<std::size_t>(var)] = k;
        self(self, var + 1, left - k);
      }
    };
    rec(rec, 0, d);
  }
  std::map<std::vector<int>, int> mono_idx;
  for (std::size_t i = 0; i < monos.size(); ++i) mono_idx[monos[i]] = static_cast<int>(i);
  const auto src_tuples = tuples(q);
  const auto dst_tuples = tuples(q + 1);
  std::map<std::vector<int>, int> src_idx;
  for (std::size_t i = 0; i < src_tuples.size(); ++i) src_idx[src_tuples[i]] = static_cast<int>(i);
  const int nm = static_cast<int>(monos.size());

  // e_i . x^beta as a sparse vector over monomial indices
  auto act = [&](int i, const std::vector<int>& beta) {
    std::map<int, Rational> out;
    for (int k = 0; k < n; ++k) {
      const int a = beta[static_cast<std::size_t>(k)];
      if (a == 0) continue;
      for (int m = 0; m < n; ++m) {
        const Rational c = g.constant(i, k, m);
        if (c == 0) continue;
        std::vector<int> e = beta;
        e[static_cast<std::size_t>(k)] -= 1;
        e[static_cast<std::size_t>(m)] += 1;
        out[mono_idx.at(e)] += c * a;
      }
    }
    return out;
  };

  ExactMatrix mat(static_cast<int>(dst_tuples.size()) * nm, static_cast<int>(src_tuples.size()) * nm);
  for (std::size_t row_t = 0; row_t < dst_tuples.size(); ++row_t) {
    const auto& idx = dst_tuples[row_t];
    // sum_s (-1)^s e_{i_s} . w(..., hat i_s, ...)
    for (int s = 0; s <= q; ++s) {
      std::vector<int> rest;
      for (int u = 0; u <= q; ++u)
        if (u != s) rest.push_back(idx[static_cast<std::size_t>(u)]);
      const int col_t = src_idx.at(rest);
      const Rational sign = s % 2 == 0 ? 1 : -1;
      for (int b = 0; b < nm; ++b)
        for (const auto& [out_m, c] : act(idx[static_cast<std::size_t>(s)], monos[static_cast<std::size_t>(b)]))
          mat.add(static_cast<int>(row_t) * nm + out_m, col_t * nm + b, sign * c);
    }
    // sum_{s<t} (-1)^(s+t) w([e_{i_s}, e_{i_t}], ..., hat i_s, ..., hat i_t, ...)
    for (int s = 0; s <= q; ++s)
      for (int t = s + 1; t <= q; ++t) {
        std::vector<int> rest;
        for (int u = 0; u <= q; ++u)
          if (u != s && u != t) rest.push_back(idx[static_cast<std::size_t>(u)]);
        for (int m = 0; m < n; ++m) {
          const Rational c = g.constant(idx[static_cast<std::size_t>(s)], idx[static_cast<std::size_t>(t)], m);
          if (c == 0) continue;
          if (std::find(rest.begin(), rest.end(), m) != rest.end()) continue;
          // sort (m, rest) and record the parity of moving m into place
          std::vector<int> args{m};
          args.insert(args.end(), rest.begin(), rest.end());
          int moves = 0;
          for (int r : rest)
            if (r < m) ++moves;
          std::sort(args.begin(), args.end());
          const int col_t = src_idx.at(args);
          Rational sign = (s + t + moves) % 2 == 0 ? 1 : -1;
          for (int b = 0; b < nm; ++b) mat.add(static_cast<int>(row_t) * nm + b, col_t * nm + b, sign * c);
        }
      }
  }
  return mat;
}

// ---------------------------------------------------------------------------
// Cohomology tables

enum class Method { lichnerowicz, chevalley_eilenberg };

inline const char* to_string(Method m) { return m == Method::lichnerowicz ? "lichnerowicz" : "chevalley-eilenberg"; }

class JacobiError : public std::runtime_error {
 public:
  JacobiError(const std::string& witness)
      : std::runtime_error("structure constants violate the Jacobi identity: [pi,pi] has component " + witness),
        witness_(witness) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

struct CohomologyEntry {
  Method method = Method::lichnerowicz;
  int q = 0;
  int d = 0;
  int dim_chain = 0;
  int rank_in = 0;
  int rank_out = 0;
  int dim_h = 0;
};

struct CohomologyTable {
  int n = 0;
  int q_max = 0;
  int d_max = 0;
  std::vector<CohomologyEntry> entries;  // sorted by (method, d, q)

  const CohomologyEntry* find(Method m, int q, int d) const {
    for (const auto& e : entries)
      if (e.method == m && e.q == q && e.d == d) return &e;
    return nullptr;
  }

  int dim_h(Method m, int q, int d) const {
    const auto* e = find(m, q, d);
    if (e == nullptr) throw std::out_of_range("slice not in table");
    return e->dim_h;
  }
};

inline int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

inline void require_jacobi(const LieAlgebra& g) {
  const auto jac = jacobi_check(g);
  if (!jac.is_zero()) throw JacobiError(first_component(jac, g.names));
}

inline ExactMatrix differential_matrix(const LieAlgebra& g, const Multivector<Polynomial>& pi, Method method, int q, int d) {
  return method == Method::lichnerowicz ? lichnerowicz_matrix(pi, q, d) : ce_matrix(g, q, d);
}

/// Table of dim H^q_d for q <= q_max, d <= d_max, for each requested method.
inline CohomologyTable cohomology_table(const LieAlgebra& g, int q_max, int d_max, const std::vector<Method>& methods,
                                        int jobs = 1, Elimination elim = Elimination::content_removal) {
  if (d_max < 0 || q_max < 0) throw std::invalid_argument("q_max and d_max must be non-negative");
  require_jacobi(g);
  const int n = g.dim;
  q_max = std::min(q_max, n);
  const auto pi = build_linear_poisson(g);

  // rank of the outgoing differential for q = 0..q_max, plus the incoming one at q = 0
  struct Task {
    Method method;
    int q;
    int d;
  };
  std::vector<Task> tasks;
  for (Method m : methods)
    for (int d = 0; d <= d_max; ++d)
      for (int q = 0; q <= q_max; ++q) tasks.push_back({m, q, d});
  std::vector<int> ranks(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const Task& t = tasks[static_cast<std::size_t>(i)];
    ranks[static_cast<std::size_t>(i)] = t.q >= n ? 0 : rank(differential_matrix(g, pi, t.method, t.q, t.d), elim);
  });

  CohomologyTable table;
  table.n = n;
  table.q_max = q_max;
  table.d_max = d_max;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    CohomologyEntry e;
    e.method = t.method;
    e.q = t.q;
    e.d = t.d;
    e.dim_chain = binomial(n, t.q) * binomial(t.d + n - 1, n - 1);
    e.rank_out = ranks[i];
    e.rank_in = t.q == 0 ? 0 : ranks[i - 1];
    e.dim_h = e.dim_chain - e.rank_out - e.rank_in;
    if (e.dim_h < 0) throw std::logic_error("negative cohomology dimension");
    table.entries.push_back(e);
  }
  return table;
}

/// Sum_q (-1)^q dim H^q_d; requires q_max = n.
inline long long euler_characteristic(const CohomologyTable& t, Method m, int d) {
  long long chi = 0;
  for (int q = 0; q <= t.q_max; ++q) chi += (q % 2 == 0 ? 1 : -1) * t.dim_h(m, q, d);
  return chi;
}

// ---------------------------------------------------------------------------
// Representatives and Casimirs

/// Cocycles spanning a complement of the coboundaries in slice (q, d).
/// The columns [image | kernel] are echelonized; kernel vectors landing on
/// pivot columns form the complement.
inline std::vector<Multivector<Polynomial>> representatives(const LieAlgebra& g, int q, int d,
                                                            Elimination elim = Elimination::content_removal) {
  require_jacobi(g);
  const int n = g.dim;
  if (q < 0 || q > n || d < 0) return {};
  const auto pi = build_linear_poisson(g);
  const SliceBasis slice(n, q, d);
  const auto kernel = q == n ? rank_kernel(ExactMatrix(0, slice.size()), elim).kernel : rank_kernel(lichnerowicz_matrix(pi, q, d), elim).kernel;
  if (kernel.empty()) return {};
  ExactMatrix in = q == 0 ? ExactMatrix(slice.size(), 0) : lichnerowicz_matrix(pi, q - 1, d);
  const int n_img = in.cols();
  ExactMatrix stacked(slice.size(), n_img + static_cast<int>(kernel.size()));
  for (int i = 0; i < in.rows(); ++i)
    for (const auto& [j, v] : in.row(i)) stacked.add(i, j, v);
  for (std::size_t k = 0; k < kernel.size(); ++k)
    for (int i = 0; i < slice.size(); ++i) stacked.add(i, n_img + static_cast<int>(k), kernel[k][static_cast<std::size_t>(i)]);
  const Echelon e = echelon(stacked, elim);
  std::vector<Multivector<Polynomial>> reps;
  for (int c : e.pivot_cols)
    if (c >= n_img) reps.push_back(slice.vector_to_multivector(kernel[static_cast<std::size_t>(c - n_img)]));
  return reps;
}

struct CasimirCheck {
  bool ok = false;
  Polynomial generator;
  std::vector<std::string> details;
};

/// Checks that the degree-d Casimirs are spanned by f^(d/2) (d even) and
/// vanish (d odd), where f spans the quadratic Casimirs.
inline CasimirCheck casimir_generator_check(const LieAlgebra& g, int d_max, Elimination elim = Elimination::content_removal) {
  require_jacobi(g);
  if (g.is_abelian()) throw std::invalid_argument("every polynomial is a Casimir of an abelian algebra");
  const int n = g.dim;
  const auto pi = build_linear_poisson(g);
  CasimirCheck out;
  out.ok = true;
  auto casimirs = [&](int d) { return rank_kernel(lichnerowicz_matrix(pi, 0, d), elim).kernel; };
  const auto quad = casimirs(2);
  if (quad.size() != 1) {
    out.ok = false;
    out.details.push_back("d=2: expected one quadratic Casimir, found " + std::to_string(quad.size()));
    return out;
  }
  const SliceBasis s2(n, 0, 2);
  out.generator = s2.vector_to_multivector(quad.front()).as_scalar();
  for (int d = 0; d <= d_max; ++d) {
    const auto ker = casimirs(d);
    std::string line = "d=" + std::to_string(d) + ": kernel dim " + std::to_string(ker.size());
    bool good = true;
    if (d % 2 != 0) {
      good = ker.empty();
    } else if (ker.size() != 1) {
      good = false;
    } else {
      // proportionality of the kernel vector to the coordinates of f^(d/2)
      const SliceBasis sd(n, 0, d);
      const auto target = sd.coordinates(Multivector<Polynomial>::scalar(n, out.generator.pow(static_cast<unsigned>(d / 2))));
      const auto& v = ker.front();
      Rational ratio = 0;
      for (std::size_t i = 0; i < v.size() && good; ++i) {
        if ((v[i] == 0) != (target[i] == 0)) good = false;
        else if (v[i] != 0) {
          const Rational r = v[i] / target[i];
          if (ratio == 0) ratio = r;
          else if (r != ratio) good = false;
        }
      }
      line += good ? ", spanned by f^" + std::to_string(d / 2) : ", not proportional to f^" + std::to_string(d / 2);
    }
    if (!good) out.ok = false;
    out.details.push_back(line + (good ? " ok" : " FAIL"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline void write_csv(std::ostream& os, const CohomologyTable& t) {
  os << "method,q,d,dim_chain,rank_in,rank_out,dim_H\n";
  for (const auto& e : t.entries)
    os << to_string(e.method) << ',' << e.q << ',' << e.d << ',' << e.dim_chain << ',' << e.rank_in << ',' << e.rank_out << ','
       << e.dim_h << '\n';
}

/// [{"subset":[1-based indices], "monomial":[exponents], "coeff":"p/q"}, ...]
inline nlohmann::json multivector_to_json(const Multivector<Polynomial>& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [s, c] : p.ordered_components()) {
    std::vector<int> subset;
    for (int i : subsets::indices(s)) subset.push_back(i + 1);
    for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it)
      arr.push_back({{"subset", subset}, {"monomial", it->first.exponents(p.nvars())}, {"coeff", it->second.get_str()}});
  }
  return arr;
}

inline Multivector<Polynomial> multivector_from_json(const nlohmann::json& arr, int n, int degree) {
  Multivector<Polynomial> p(n, degree, n);
  for (const auto& term : arr) {
    std::vector<int> idx;
    for (int i : term.at("subset").get<std::vector<int>>()) idx.push_back(i - 1);
    const auto exps = term.at("monomial").get<std::vector<int>>();
    p += Multivector<Polynomial>::basis(n, idx, Polynomial::term(n, Monomial::from_exponents(exps), parse_rational(term.at("coeff").get<std::string>())));
  }
  return p;
}

inline nlohmann::json to_json(const CohomologyTable& t) {
  nlohmann::json doc;
  doc["n"] = t.n;
  doc["q_max"] = t.q_max;
  doc["d_max"] = t.d_max;
  doc["entries"] = nlohmann::json::array();
  for (const auto& e : t.entries)
    doc["entries"].push_back({{"method", to_string(e.method)},
                              {"q", e.q},
                              {"d", e.d},
                              {"dim_chain", e.dim_chain},
                              {"rank_in", e.rank_in},
                              {"rank_out", e.rank_out},
                              {"dim_H", e.dim_h}});
  return doc;
}

}  // namespace poisson
