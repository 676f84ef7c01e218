#pragma once

#include "poisson/calculus.hpp"

#include <random>

namespace testing_support {

using namespace poisson;

inline Polynomial X(int nvars = 3) { return Polynomial::variable(nvars, 0); }
inline Polynomial Y(int nvars = 3) { return Polynomial::variable(nvars, 1); }
inline Polynomial Z(int nvars = 3) { return Polynomial::variable(nvars, 2); }
inline Polynomial C(const Rational& c, int nvars = 3) { return Polynomial::constant(nvars, c); }

/// pi = x d_y^d_z + y d_z^d_x - z d_x^d_y.
inline Multivector<Polynomial> sl2_pi() {
  Multivector<Polynomial> pi(3, 2, 3);
  pi += Multivector<Polynomial>::basis(3, {1, 2}, X());
  pi += Multivector<Polynomial>::basis(3, {2, 0}, Y());
  pi += Multivector<Polynomial>::basis(3, {0, 1}, -Z());
  return pi;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, int max_degree, int max_terms) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> expo(0, max_degree);
  std::uniform_int_distribution<int> coef(-5, 5);
  Polynomial p(3);
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    int e[3];
    int budget = max_degree;
    for (int& ei : e) {
      ei = std::min(expo(rng), budget);
      budget -= ei;
    }
    p.add_term(Monomial::from_exponents(std::span<const int>(e, 3)), Rational(coef(rng)));
  }
  return p;
}

template <Variance V>
GradedTensor<Polynomial, V> random_tensor(std::mt19937_64& rng, int degree, int max_degree = 2, int max_terms = 3) {
  GradedTensor<Polynomial, V> t(3, degree, 3);
  for (Mask m : subsets::all_of_size(3, degree)) t.add(m, random_polynomial(rng, max_degree, max_terms));
  return t;
}

}  // namespace testing_support
