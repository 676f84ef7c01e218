#include "support.hpp"

#include <gtest/gtest.h>

using namespace poisson;
using namespace testing_support;

using MV = Multivector<Polynomial>;
using DF = DifferentialForm<Polynomial>;
using RMV = Multivector<RationalFunction>;
using RDF = DifferentialForm<RationalFunction>;

namespace {

MV vec(int i, const Polynomial& c) { return MV::basis(3, {i}, c); }
DF dx(int i, const Polynomial& c = C(1)) { return DF::basis(3, {i}, c); }

DF df() { return dx(0, C(2) * X()) + dx(1, C(2) * Y()) + dx(2, C(-2) * Z()); }

std::mt19937_64 seeded(std::uint64_t salt) { return std::mt19937_64(20260101ULL + salt); }

}  // namespace

TEST(Rational, ParsesFractions) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Polynomial, ArithmeticAndNormalization) {
  Polynomial p = X() * X() - Y() * Y();
  Polynomial q = (X() - Y()) * (X() + Y());
  EXPECT_EQ(p, q);
  EXPECT_TRUE((p - q).is_zero());
  EXPECT_EQ((p - q).terms().size(), 0U);
  EXPECT_EQ(p.derivative(0), C(2) * X());
  EXPECT_EQ((X() + C(1)).pow(3).coefficient(Monomial::unit(0, 2)), Rational(3));
  auto quotient = exact_divide(p, X() - Y());
  ASSERT_TRUE(quotient.has_value());
  EXPECT_EQ(*quotient, X() + Y());
  EXPECT_FALSE(exact_divide(p, X() + Z()).has_value());
  EXPECT_THROW(X() + Polynomial::variable(4, 0), std::invalid_argument);
}

TEST(Polynomial, ComposeSubstitutes) {
  Polynomial f = X() * X() + Y() * Y() - Z() * Z();
  std::vector<Polynomial> subs{X(), -Y(), -Z()};
  EXPECT_EQ(f.compose(subs), f);
  Rational pt[3] = {1, 2, 3};
  EXPECT_EQ(f.evaluate(pt), Rational(-4));
}

TEST(RationalFunction, CrossMultiplicationEquality) {
  RationalFunction a(X(), Y());
  RationalFunction b(X() * Z(), Y() * Z());
  EXPECT_TRUE(rf_equal(a, b));
  RationalFunction c(C(1), X() * X() + Y() * Y());
  RationalFunction d(C(1), X() * X() + Z() * Z());
  EXPECT_FALSE(rf_equal(c, d));
  RationalFunction e(X() * X() - Y() * Y(), X() - Y());
  RationalFunction g(X() + Y());
  EXPECT_TRUE(rf_equal(e, g));
  EXPECT_TRUE(e.is_polynomial());
  EXPECT_THROW(RationalFunction(X(), Polynomial(3)), std::domain_error);
}

TEST(RationalFunction, QuotientRule) {
  Polynomial r2 = X() * X() + Y() * Y();
  RationalFunction a(X(), r2);
  RationalFunction expected(Y() * Y() - X() * X(), r2 * r2);
  EXPECT_EQ(a.derivative(0), expected);
  EXPECT_EQ(a * RationalFunction(r2), RationalFunction(X()));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(a / a, RationalFunction::constant(3, 1));
}

TEST(Wedge, BasisAndParity) {
  MV dxy = wedge(vec(0, C(1)), vec(1, C(1)));
  EXPECT_EQ(dxy, MV::basis(3, {0, 1}, C(1)));
  EXPECT_TRUE(wedge(vec(0, C(1)), vec(0, C(1))).is_zero());
  EXPECT_EQ(wedge(vec(1, X()), vec(0, Y())), MV::basis(3, {0, 1}, -(X() * Y())));
  EXPECT_EQ(MV::basis(3, {2, 0, 1}, C(1)), MV::basis(3, {0, 1, 2}, C(1)));
  EXPECT_EQ(MV::basis(3, {1, 0, 2}, C(1)), -MV::basis(3, {0, 1, 2}, C(1)));
}

TEST(Wedge, GradedCommutativeAndAssociative) {
  auto rng = seeded(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 3;
    const int q = (trial / 3) % 3;
    auto a = random_tensor<Variance::covariant>(rng, p);
    auto b = random_tensor<Variance::covariant>(rng, q);
    auto c = random_tensor<Variance::covariant>(rng, 1);
    const Rational s = (p * q) % 2 == 0 ? 1 : -1;
    EXPECT_EQ(wedge(a, b), s * wedge(b, a));
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
}

TEST(Contraction, CovectorIntoMultivector) {
  EXPECT_EQ(contract_covector(dx(0), MV::basis(3, {0, 1}, C(1))), vec(1, C(1)));
  MV pi = sl2_pi();
  EXPECT_EQ(sharp(pi, dx(0)), vec(2, -Y()) + vec(1, -Z()));
  EXPECT_TRUE(sharp(pi, df()).is_zero());
  EXPECT_THROW(contract_covector(dx(0), MV::scalar(3, X())), std::invalid_argument);
}

TEST(Contraction, IsDerivation) {
  auto rng = seeded(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 2;
    auto alpha = random_tensor<Variance::covariant>(rng, 1);
    auto a = random_tensor<Variance::contravariant>(rng, p);
    auto b = random_tensor<Variance::contravariant>(rng, 1);
    MV lhs = contract_covector(alpha, wedge(a, b));
    MV rhs = wedge(contract_covector(alpha, a), b);
    MV second = wedge(a, contract_covector(alpha, b));
    rhs += p % 2 == 0 ? second : -second;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Contraction, MultivectorIntoForm) {
  MV pi = sl2_pi();
  DF dxdy = DF::basis(3, {0, 1}, C(1));
  EXPECT_EQ(contract_multivector_into_form(pi, dxdy), DF::scalar(3, -Z()));
  EXPECT_EQ(contract_multivector_into_form(vec(0, C(1)), dx(0)), DF::scalar(3, C(1)));
  DF deficit = contract_multivector_into_form(pi, dx(0));
  EXPECT_TRUE(deficit.is_zero());
  EXPECT_EQ(deficit.degree(), -1);
  // pairing convention: <d_I, dx_I> = 1 for every subset
  for (int k = 0; k <= 3; ++k)
    for (Mask m : subsets::all_of_size(3, k)) {
      MV u(3, k, 3);
      u.add(m, C(1));
      DF w(3, k, 3);
      w.add(m, C(1));
      EXPECT_EQ(contract_multivector_into_form(u, w), DF::scalar(3, C(1)));
    }
}

TEST(ExteriorDerivative, Examples) {
  EXPECT_EQ(exterior_derivative(dx(1, X())), DF::basis(3, {0, 1}, C(1)));
  EXPECT_TRUE(exterior_derivative(df()).is_zero());
  Polynomial r2 = X() * X() + Y() * Y();
  RDF dtheta(3, 1, 3);
  dtheta.add(0b001, RationalFunction(-Y(), r2));
  dtheta.add(0b010, RationalFunction(X(), r2));
  EXPECT_TRUE(exterior_derivative(dtheta).is_zero());
}

TEST(ExteriorDerivative, SquaresToZeroOnRationalForms) {
  auto rng = seeded(3);
  Polynomial den = X() * X() + Y() * Y() + C(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = trial % 2;
    auto w = random_tensor<Variance::covariant>(rng, k);
    RDF rw = w.map_coefficients([&](const Polynomial& c) { return RationalFunction(c, den); });
    EXPECT_TRUE(exterior_derivative(exterior_derivative(rw)).is_zero());
  }
}

TEST(ExteriorDerivative, Leibniz) {
  auto rng = seeded(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = trial % 2;
    auto a = random_tensor<Variance::covariant>(rng, p);
    auto b = random_tensor<Variance::covariant>(rng, 1);
    DF rhs = wedge(exterior_derivative(a), b);
    DF second = wedge(a, exterior_derivative(b));
    rhs += p % 2 == 0 ? second : -second;
    EXPECT_EQ(exterior_derivative(wedge(a, b)), rhs);
  }
}

TEST(Schouten, Examples) {
  EXPECT_EQ(schouten_bracket(vec(0, C(1)), vec(1, X())), vec(1, C(1)));
  MV pi = sl2_pi();
  EXPECT_TRUE(schouten_bracket(pi, pi).is_zero());
  Polynomial f = X() * X() + Y() * Y() - Z() * Z();
  EXPECT_TRUE(schouten_bracket(pi, MV::scalar(3, f)).is_zero());
  // [X, h] = X(h)
  MV v = vec(0, Y()) + vec(2, X() * Z());
  EXPECT_EQ(schouten_bracket(v, MV::scalar(3, f)), MV::scalar(3, C(2) * X() * Y() - C(2) * X() * Z() * Z()));
}

TEST(Schouten, LieBracketOfVectorFields) {
  auto rng = seeded(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_tensor<Variance::contravariant>(rng, 1);
    auto b = random_tensor<Variance::contravariant>(rng, 1);
    MV expected(3, 1, 3);
    for (int j = 0; j < 3; ++j) {
      Polynomial c(3);
      for (int i = 0; i < 3; ++i) {
        c += a.component(Mask{1} << i) * b.component(Mask{1} << j).derivative(i);
        c -= b.component(Mask{1} << i) * a.component(Mask{1} << j).derivative(i);
      }
      expected.add(Mask{1} << j, c);
    }
    EXPECT_EQ(schouten_bracket(a, b), expected);
  }
}

TEST(Schouten, AxiomsOnRandomMultivectors) {
  auto rng = seeded(6);
  int cases = 0;
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q)
      for (int r = 0; r <= 3; ++r) {
        if (p + q + r > 5) continue;
        for (int rep = 0; rep < 2; ++rep, ++cases) {
          auto a = random_tensor<Variance::contravariant>(rng, p);
          auto b = random_tensor<Variance::contravariant>(rng, q);
          auto c = random_tensor<Variance::contravariant>(rng, r);
          const int sa = ((p - 1) * (q - 1)) % 2 == 0 ? 1 : -1;
          EXPECT_EQ(schouten_bracket(a, b), Rational(-sa) * schouten_bracket(b, a));
          MV leib = wedge(schouten_bracket(a, b), c);
          MV second = wedge(b, schouten_bracket(a, c));
          leib += ((p - 1) * q) % 2 == 0 ? second : -second;
          EXPECT_EQ(schouten_bracket(a, wedge(b, c)), leib);
          // (-1)^{(p-1)(r-1)}[a,[b,c]] + cyclic = 0
          auto term = [](int s, const MV& t) { return s % 2 == 0 ? t : -t; };
          MV jac = term((p - 1) * (r - 1), schouten_bracket(a, schouten_bracket(b, c)));
          jac += term((q - 1) * (p - 1), schouten_bracket(b, schouten_bracket(c, a)));
          jac += term((r - 1) * (q - 1), schouten_bracket(c, schouten_bracket(a, b)));
          EXPECT_TRUE(jac.is_zero()) << p << q << r;
        }
      }
  EXPECT_GE(cases, 50);
}

TEST(Schouten, PoissonDifferentialSquaresToZero) {
  auto rng = seeded(7);
  MV pi = sl2_pi();
  for (int trial = 0; trial < 40; ++trial) {
    auto p = random_tensor<Variance::contravariant>(rng, trial % 3, 3, 4);
    EXPECT_TRUE(poisson_differential(pi, poisson_differential(pi, p)).is_zero());
  }
}

TEST(LieDerivative, Examples) {
  EXPECT_EQ(lie_derivative(vec(0, C(1)), DF::scalar(3, X())), DF::scalar(3, C(1)));
  EXPECT_EQ(lie_derivative(vec(0, C(1)), MV::scalar(3, X())), MV::scalar(3, C(1)));
  EXPECT_THROW(lie_derivative(sl2_pi(), DF::scalar(3, X())), std::invalid_argument);
}

TEST(LieDerivative, CartanCommutesWithD) {
  auto rng = seeded(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = random_tensor<Variance::contravariant>(rng, 1);
    auto w = random_tensor<Variance::covariant>(rng, trial % 3);
    EXPECT_EQ(exterior_derivative(lie_derivative(v, w)), lie_derivative(v, exterior_derivative(w)));
  }
}

TEST(Koszul, Examples) {
  MV pi = sl2_pi();
  DF h = DF::scalar(3, X() * Y());
  DF dh = koszul_differential(pi, h);
  EXPECT_TRUE(dh.is_zero());
  EXPECT_EQ(dh.degree(), -1);
  EXPECT_EQ(koszul_differential(pi, DF::basis(3, {0, 1}, C(1))), dx(2));
  DF w = DF::basis(3, {1, 2}, X());
  EXPECT_TRUE(koszul_differential(pi, koszul_differential(pi, w)).is_zero());
}

TEST(Koszul, AnticommutesWithD) {
  auto rng = seeded(9);
  MV pi = sl2_pi();
  for (int trial = 0; trial < 30; ++trial) {
    auto w = random_tensor<Variance::covariant>(rng, trial % 4, 3, 3);
    EXPECT_TRUE(koszul_differential(pi, koszul_differential(pi, w)).is_zero());
    DF anti = exterior_derivative(koszul_differential(pi, w));
    anti += koszul_differential(pi, exterior_derivative(w));
    EXPECT_TRUE(anti.is_zero());
  }
}

TEST(MuFlat, Examples) {
  EXPECT_EQ(mu_flat(vec(0, C(1))), DF::basis(3, {1, 2}, C(1)));
  EXPECT_EQ(mu_flat(MV::basis(3, {0, 1, 2}, C(1))), DF::scalar(3, C(1)));
  DF expected = dx(0, X()) + dx(1, Y()) + dx(2, -Z());
  EXPECT_EQ(mu_flat(sl2_pi()), expected);
  EXPECT_EQ(mu_flat(sl2_pi()), Rational(1, 2) * df());
  EXPECT_THROW(mu_flat(Multivector<Polynomial>(2, 1, 2)), std::invalid_argument);
}

TEST(MuFlat, BijectiveOnBasis) {
  for (int k = 0; k <= 3; ++k) {
    std::set<Mask> images;
    for (Mask m : subsets::all_of_size(3, k)) {
      MV u(3, k, 3);
      u.add(m, C(1));
      DF w = mu_flat(u);
      ASSERT_EQ(w.components().size(), 1U);
      EXPECT_EQ(w.degree(), 3 - k);
      const Rational c = w.components().begin()->second.constant_term();
      EXPECT_TRUE(c == 1 || c == -1);
      images.insert(w.components().begin()->first);
    }
    EXPECT_EQ(images.size(), subsets::all_of_size(3, k).size());
  }
}

TEST(MuFlat, IntertwinesDifferentialsWithFrozenSigns) {
  // mu_flat(d_pi P) = eps_k delta_pi(mu_flat P)
  const int eps[3] = {-1, 1, -1};
  auto rng = seeded(10);
  MV pi = sl2_pi();
  for (int trial = 0; trial < 30; ++trial) {
    const int k = trial % 3;
    auto p = random_tensor<Variance::contravariant>(rng, k, 3, 4);
    DF lhs = mu_flat(poisson_differential(pi, p));
    DF rhs = koszul_differential(pi, mu_flat(p));
    EXPECT_EQ(lhs, Rational(eps[k]) * rhs) << "k=" << k;
  }
}

TEST(Pushforward, Examples) {
  MV pi = sl2_pi();
  EXPECT_EQ(pushforward(LinearMap::identity(3), pi), pi);
  LinearMap tau = LinearMap::diagonal({1, -1, -1});
  EXPECT_EQ(pushforward(tau, pi), pi);
  LinearMap l = LinearMap::diagonal({2, 1, 1});
  EXPECT_EQ(pushforward(l, vec(0, X())), vec(0, X()));
  EXPECT_EQ(pushforward(l, vec(0, C(1))), vec(0, C(2)));
  EXPECT_THROW(pushforward(LinearMap(3), pi), std::domain_error);
}

TEST(Pushforward, Functorial) {
  auto rng = seeded(11);
  LinearMap a{{1, 2, 0}, {0, 1, 0}, {1, 0, 1}};
  LinearMap b{{0, 1, 0}, {-1, 0, 0}, {0, 3, 2}};
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_tensor<Variance::contravariant>(rng, trial % 4);
    EXPECT_EQ(pushforward(a * b, p), pushforward(a, pushforward(b, p)));
  }
}

TEST(Pushforward, PreservesBracket) {
  auto rng = seeded(12);
  LinearMap a{{1, 2, 0}, {0, 1, 0}, {1, 0, 1}};
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_tensor<Variance::contravariant>(rng, 1 + trial % 2);
    auto q = random_tensor<Variance::contravariant>(rng, 1);
    EXPECT_EQ(pushforward(a, schouten_bracket(p, q)), schouten_bracket(pushforward(a, p), pushforward(a, q)));
  }
}

TEST(Tensor, MismatchedShapesThrow) {
  EXPECT_THROW(wedge(MV(3, 1, 3), MV(2, 1, 3)), std::invalid_argument);
  MV a = vec(0, X());
  EXPECT_THROW(a += MV::basis(3, {0, 1}, C(1)), std::invalid_argument);
  EXPECT_THROW(MV::basis(3, {3}, C(1)), std::out_of_range);
  EXPECT_TRUE(MV::basis(3, {1, 1}, C(1)).is_zero());
  EXPECT_TRUE(MV(3, 4, 3).is_zero());
}
