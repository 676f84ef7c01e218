#pragma once

// Exterior calculus on multivector fields and differential forms.
//
// Sign ledger (fixed once, used everywhere):
//   * contraction of a covector into a multivector is a left derivation,
//     i_a(U ^ V) = a(U) V - a(V) U, and pi#(a) := i_a pi;
//   * a multivector acts on forms by the pairing convention
//     i_{U^V} = i_V o i_U, so that <d_I, dx_I> = 1 and i_pi(dx^dy) = pi(dx, dy);
//   * the Schouten bracket is the odd Poisson bracket with the right
//     derivative in the odd generators, which gives
//     [P, Q^R] = [P,Q]^R + (-1)^((p-1)q) Q^[P,R].

#include "poisson/graded_tensor.hpp"
#include "poisson/linear_map.hpp"

#include <stdexcept>
#include <vector>

namespace poisson {

namespace detail {

template <class S, Variance V>
void check_same_space(const GradedTensor<S, V>& a, const GradedTensor<S, V>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensors have different ambient dimension");
  if (a.nvars() != b.nvars()) throw std::invalid_argument("tensors have different coefficient rings");
}

template <Variance V>
constexpr Variance dual_of() {
  return V == Variance::contravariant ? Variance::covariant : Variance::contravariant;
}

/// Left derivation by a degree-1 tensor of the opposite variance.
template <class S, Variance V>
GradedTensor<S, V> left_contract(const GradedTensor<S, dual_of<V>()>& a, const GradedTensor<S, V>& t) {
  if (a.degree() != 1) throw std::invalid_argument("contraction needs a degree-1 argument");
  if (a.dim() != t.dim()) throw std::invalid_argument("contraction across different dimensions");
  if (t.degree() < 1) throw std::invalid_argument("contraction into a degree-0 tensor");
  GradedTensor<S, V> r(t.dim(), t.degree() - 1, t.nvars());
  for (const auto& [m, c] : t.components()) {
    for (int i : subsets::indices(m)) {
      const Mask bit = Mask{1} << static_cast<unsigned>(i);
      auto it = a.components().find(bit);
      if (it == a.components().end()) continue;
      const S term = it->second * c;
      r.add(m & ~bit, subsets::count_below(m, i) % 2 == 0 ? term : -term);
    }
  }
  return r;
}

}  // namespace detail

template <class S, Variance V>
GradedTensor<S, V> wedge(const GradedTensor<S, V>& a, const GradedTensor<S, V>& b) {
  detail::check_same_space(a, b);
  GradedTensor<S, V> r(a.dim(), a.degree() + b.degree(), a.nvars());
  if (a.degree() + b.degree() > a.dim()) return r;
  for (const auto& [ma, ca] : a.components()) {
    for (const auto& [mb, cb] : b.components()) {
      if ((ma & mb) != 0) continue;
      const S prod = ca * cb;
      r.add(ma | mb, subsets::merge_sign(ma, mb) > 0 ? prod : -prod);
    }
  }
  return r;
}

/// i_alpha P for a one-form alpha; lowers the degree of P by one.
template <class S>
Multivector<S> contract_covector(const DifferentialForm<S>& alpha, const Multivector<S>& p) {
  return detail::left_contract(alpha, p);
}

/// pi#(alpha) := i_alpha pi.
template <class S>
Multivector<S> sharp(const Multivector<S>& pi, const DifferentialForm<S>& alpha) {
  return contract_covector(alpha, pi);
}

/// i_X omega for a vector field X.
template <class S>
DifferentialForm<S> interior(const Multivector<S>& x, const DifferentialForm<S>& omega) {
  return detail::left_contract(x, omega);
}

/// i_P omega with i_{d_i1 ^ ... ^ d_ik} = i_{d_ik} o ... o i_{d_i1}. A degree
/// deficit yields the zero form of negative degree.
template <class S>
DifferentialForm<S> contract_multivector_into_form(const Multivector<S>& p, const DifferentialForm<S>& omega) {
  if (p.dim() != omega.dim()) throw std::invalid_argument("contraction across different dimensions");
  if (p.nvars() != omega.nvars()) throw std::invalid_argument("contraction across different coefficient rings");
  DifferentialForm<S> r(omega.dim(), omega.degree() - p.degree(), omega.nvars());
  if (omega.degree() < p.degree()) return r;
  for (const auto& [mp, cp] : p.components()) {
    for (const auto& [mw, cw] : omega.components()) {
      if ((mp & mw) != mp) continue;
      Mask cur = mw;
      int sgn = 1;
      for (int i : subsets::indices(mp)) {
        if (subsets::count_below(cur, i) % 2 != 0) sgn = -sgn;
        cur &= ~(Mask{1} << static_cast<unsigned>(i));
      }
      const S prod = cp * cw;
      r.add(cur, sgn > 0 ? prod : -prod);
    }
  }
  return r;
}

/// Pairing <alpha, X> of a one-form with a vector field.
template <class S>
S pair(const DifferentialForm<S>& alpha, const Multivector<S>& x) {
  if (alpha.degree() != 1 || x.degree() != 1) throw std::invalid_argument("pairing needs a one-form and a vector field");
  return interior(x, alpha).as_scalar();
}

template <class S>
DifferentialForm<S> exterior_derivative(const DifferentialForm<S>& omega) {
  DifferentialForm<S> r(omega.dim(), omega.degree() + 1, omega.nvars());
  if (omega.degree() < 0 || omega.degree() >= omega.dim()) return r;
  for (const auto& [m, c] : omega.components()) {
    for (int j = 0; j < omega.dim(); ++j) {
      const Mask bit = Mask{1} << static_cast<unsigned>(j);
      if ((m & bit) != 0) continue;
      S dc = c.derivative(j);
      if (dc.is_zero()) continue;
      r.add(m | bit, subsets::count_below(m, j) % 2 == 0 ? dc : -dc);
    }
  }
  return r;
}

/// Schouten-Nijenhuis bracket, computed as the odd Poisson bracket
///   [P,Q] = sum_i dP/dzeta_i ^ dQ/dx_i - (-1)^((p-1)(q-1)) dQ/dzeta_i ^ dP/dx_i
/// with right derivatives in the odd generators zeta_i = d/dx_i.
template <class S>
Multivector<S> schouten_bracket(const Multivector<S>& p, const Multivector<S>& q) {
  detail::check_same_space(p, q);
  const int n = p.dim();
  const int deg = p.degree() + q.degree() - 1;
  Multivector<S> r(n, deg, p.nvars());
  if (p.degree() < 0 || q.degree() < 0 || deg < 0 || deg > n) return r;

  // Accumulates  sign * sum_i (d/dzeta_i A) ^ (d/dx_i B).
  auto half = [&](const Multivector<S>& a, const Multivector<S>& b, bool negate) {
    const int ka = a.degree();
    for (const auto& [ma, ca] : a.components()) {
      const std::vector<int> idx = subsets::indices(ma);
      for (std::size_t pos = 0; pos < idx.size(); ++pos) {
        const int i = idx[pos];
        const Mask rest = ma & ~(Mask{1} << static_cast<unsigned>(i));
        int sgn = (ka - 1 - static_cast<int>(pos)) % 2 == 0 ? 1 : -1;
        if (negate) sgn = -sgn;
        for (const auto& [mb, cb] : b.components()) {
          if ((rest & mb) != 0) continue;
          S db = cb.derivative(i);
          if (db.is_zero()) continue;
          const S prod = ca * db;
          r.add(rest | mb, sgn * subsets::merge_sign(rest, mb) > 0 ? prod : -prod);
        }
      }
    }
  };
  half(p, q, false);
  const bool odd = ((p.degree() - 1) * (q.degree() - 1)) % 2 != 0;
  // second term carries -(-1)^((p-1)(q-1))
  half(q, p, !odd);
  return r;
}

/// d_pi := [pi, .].
template <class S>
Multivector<S> poisson_differential(const Multivector<S>& pi, const Multivector<S>& p) {
  return schouten_bracket(pi, p);
}

template <class S>
Multivector<S> lie_derivative(const Multivector<S>& x, const Multivector<S>& p) {
  if (x.degree() != 1) throw std::invalid_argument("Lie derivative along a non-vector field");
  return schouten_bracket(x, p);
}

/// Cartan formula L_X = i_X d + d i_X.
template <class S>
DifferentialForm<S> lie_derivative(const Multivector<S>& x, const DifferentialForm<S>& omega) {
  if (x.degree() != 1) throw std::invalid_argument("Lie derivative along a non-vector field");
  DifferentialForm<S> r = interior(x, exterior_derivative(omega));
  if (omega.degree() >= 1) r += exterior_derivative(interior(x, omega));
  return r;
}

/// Koszul differential delta_pi := i_pi o d - d o i_pi; lowers the degree by one.
template <class S>
DifferentialForm<S> koszul_differential(const Multivector<S>& pi, const DifferentialForm<S>& omega) {
  if (pi.degree() != 2) throw std::invalid_argument("Koszul differential needs a bivector");
  DifferentialForm<S> r(omega.dim(), omega.degree() - 1, omega.nvars());
  if (omega.degree() < 1) return r;
  r += contract_multivector_into_form(pi, exterior_derivative(omega));
  r -= exterior_derivative(contract_multivector_into_form(pi, omega));
  return r;
}

/// The coordinate volume form dx_0 ^ ... ^ dx_{n-1}.
template <class S>
DifferentialForm<S> volume_form(int dim, int nvars) {
  DifferentialForm<S> mu(dim, dim, nvars);
  mu.add((Mask{1} << static_cast<unsigned>(dim)) - 1, S::constant(nvars, 1));
  return mu;
}

/// mu-flat: P -> i_P (dx ^ dy ^ dz).
template <class S>
DifferentialForm<S> mu_flat(const Multivector<S>& p) {
  if (p.dim() != 3) throw std::invalid_argument("mu_flat is defined in dimension 3");
  return contract_multivector_into_form(p, volume_form<S>(3, p.nvars()));
}

/// Extends a map on degree-1 elements to exterior powers:
/// e_i1 ^ ... ^ e_ik -> images[i1] ^ ... ^ images[ik].
template <Variance Out, class S, Variance In>
GradedTensor<S, Out> exterior_power_map(const GradedTensor<S, In>& t, const std::vector<GradedTensor<S, Out>>& images) {
  if (images.size() != static_cast<std::size_t>(t.dim())) throw std::invalid_argument("one image per basis element required");
  GradedTensor<S, Out> r(t.dim(), t.degree(), t.nvars());
  for (const auto& [m, c] : t.components()) {
    GradedTensor<S, Out> w = GradedTensor<S, Out>::scalar(t.dim(), c);
    for (int i : subsets::indices(m)) w = wedge(w, images[static_cast<std::size_t>(i)]);
    r += w;
  }
  return r;
}

/// The bundle map alpha -> pi#(alpha) on forms of any degree.
template <class S>
Multivector<S> sharp_power(const Multivector<S>& pi, const DifferentialForm<S>& omega, int scale = 1) {
  std::vector<Multivector<S>> images;
  for (int i = 0; i < pi.dim(); ++i) {
    auto dxi = DifferentialForm<S>::basis(pi.dim(), {i}, S::constant(pi.nvars(), 1));
    images.push_back(Rational(scale) * sharp(pi, dxi));
  }
  return exterior_power_map<Variance::contravariant>(omega, images);
}

/// Push-forward of a multivector by an invertible linear map L:
/// (L_* P)(y) = (wedge^k L) P(L^{-1} y).
template <class S>
Multivector<S> pushforward(const LinearMap& l, const Multivector<S>& p) {
  const int n = p.dim();
  if (l.dim() != n) throw std::invalid_argument("linear map and multivector dimensions differ");
  const LinearMap inv = l.inverse();
  std::vector<Polynomial> subs;
  for (int i = 0; i < p.nvars(); ++i) {
    if (i >= n) {
      subs.push_back(Polynomial::variable(p.nvars(), i));
      continue;
    }
    Polynomial s(p.nvars());
    for (int j = 0; j < n; ++j) s.add_term(Monomial::unit(j), inv(i, j));
    subs.push_back(s);
  }
  std::vector<Multivector<S>> images;
  for (int i = 0; i < n; ++i) {
    Multivector<S> v(n, 1, p.nvars());
    for (int j = 0; j < n; ++j) v.add(Mask{1} << static_cast<unsigned>(j), S::constant(p.nvars(), l(j, i)));
    images.push_back(v);
  }
  Multivector<S> substituted = p.map_coefficients([&](const S& c) { return c.compose(subs); });
  return exterior_power_map<Variance::contravariant>(substituted, images);
}

}  // namespace poisson
