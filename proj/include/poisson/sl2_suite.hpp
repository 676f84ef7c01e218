#pragma once

// Closed-form identities of the coadjoint Poisson structure of sl2(R),
// checked in exact rational-function arithmetic.
//
// Notation: r^2 = x^2 + y^2, R^2 = x^2 + y^2 + z^2, f = x^2 + y^2 - z^2,
// O = {f > 0}, I = {f < 0}.

#include "poisson/calculus.hpp"
#include "poisson/lie_algebra.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace poisson::sl2 {

using RF = RationalFunction;
using RMV = Multivector<RationalFunction>;
using RDF = DifferentialForm<RationalFunction>;

enum class Domain { global, O, I, O_union_I };

inline const char* to_string(Domain d) {
  switch (d) {
    case Domain::global: return "global";
    case Domain::O: return "O";
    case Domain::I: return "I";
    case Domain::O_union_I: return "O∪I";
  }
  return "?";
}

struct IdentityCheck {
  std::string id;
  std::string statement;
  Domain domain = Domain::global;
  bool pass = false;
  std::string witness;  // first nonzero residual component, empty on pass
};

/// Debug switches that deliberately break a convention (negative controls).
struct SignLedger {
  bool flip_omega = false;
};

/// The standard fields on R^3, in a scalar ring of `nvars` >= 3 variables
/// (the extra variables are symbolic parameters).
class Fields {
 public:
  explicit Fields(int nvars = 3, SignLedger ledger = {}) : n_(nvars), ledger_(ledger) {}

  int nvars() const { return n_; }
  Polynomial x() const { return Polynomial::variable(n_, 0); }
  Polynomial y() const { return Polynomial::variable(n_, 1); }
  Polynomial z() const { return Polynomial::variable(n_, 2); }
  Polynomial c(const Rational& v) const { return Polynomial::constant(n_, v); }
  Polynomial r2() const { return x() * x() + y() * y(); }
  Polynomial R2() const { return r2() + z() * z(); }
  Polynomial f() const { return r2() - z() * z(); }

  RF rf(const Polynomial& num, const Polynomial& den) const { return {num, den}; }
  RF rf(const Polynomial& num) const { return {num}; }

  RMV vec(const RF& a, const RF& b, const RF& cz) const {
    RMV v(3, 1, n_);
    v.add(0b001, a);
    v.add(0b010, b);
    v.add(0b100, cz);
    return v;
  }

  RDF form1(const RF& a, const RF& b, const RF& cz) const {
    RDF w(3, 1, n_);
    w.add(0b001, a);
    w.add(0b010, b);
    w.add(0b100, cz);
    return w;
  }

  RF zero() const { return RF(n_); }
  RF one() const { return RF::constant(n_, 1); }

  RMV scalar_mv(const RF& s) const { return RMV::scalar(3, s); }
  RDF scalar_form(const RF& s) const { return RDF::scalar(3, s); }

  RMV pi() const {
    RMV p(3, 2, n_);
    p += RMV::basis(3, {1, 2}, rf(x()));
    p += RMV::basis(3, {2, 0}, rf(y()));
    p += RMV::basis(3, {0, 1}, rf(-z()));
    return p;
  }

  /// T|_O = d_z + z/r^2 (x d_x + y d_y).
  RMV T() const { return vec(rf(x() * z(), r2()), rf(y() * z(), r2()), one()); }

  /// N|_O = (x d_x + y d_y) / (2 r^2).
  RMV N_O() const { return vec(rf(x(), c(2) * r2()), rf(y(), c(2) * r2()), zero()); }

  /// N|_I = (y d_y + z d_z) / (2 (y^2 - z^2)).
  RMV N_I() const {
    const Polynomial d = c(2) * (y() * y() - z() * z());
    return vec(zero(), rf(y(), d), rf(z(), d));
  }

  /// V = (x d_x + y d_y - z d_z) / (2 R^2).
  RMV V() const {
    const Polynomial d = c(2) * R2();
    return vec(rf(x(), d), rf(y(), d), rf(-z(), d));
  }

  /// W = -z^2 x d_x - z^2 y d_y - r^2 z d_z.
  RMV W() const { return vec(rf(-z() * z() * x()), rf(-z() * z() * y()), rf(-r2() * z())); }

  RDF df() const { return form1(rf(c(2) * x()), rf(c(2) * y()), rf(c(-2) * z())); }
  RDF dtheta() const { return form1(rf(-y(), r2()), rf(x(), r2()), zero()); }
  RDF dxi() const {
    const Polynomial d = z() * z() - y() * y();
    return form1(zero(), rf(z(), d), rf(-y(), d));
  }
  RDF dw() const { return form1(zero(), zero(), one()); }
  RDF dv() const { return form1(one(), zero(), zero()); }

  /// omega~ = -(x dy^dz + y dz^dx - z dx^dy) / R^2.
  RDF omega() const {
    const Polynomial d = R2();
    RDF w(3, 2, n_);
    w += RDF::basis(3, {1, 2}, rf(-x(), d));
    w += RDF::basis(3, {2, 0}, rf(-y(), d));
    w += RDF::basis(3, {0, 1}, rf(z(), d));
    return ledger_.flip_omega ? -w : w;
  }

  RDF volume() const { return volume_form<RF>(3, n_); }

  // -- the four maps built from phi = df, V and omega~ --------------------

  /// (-pi#) extended to forms of any degree.
  RMV minus_sharp(const RDF& a) const { return sharp_power(pi(), a, -1); }

  /// (-omega~_b), v -> -i_v omega~, extended to multivectors of any degree.
  RDF minus_omega_flat(const RMV& w) const {
    std::vector<RDF> images;
    const RDF om = omega();
    for (int i = 0; i < 3; ++i) images.push_back(-interior(RMV::basis(3, {i}, one()), om));
    return exterior_power_map<Variance::covariant>(w, images);
  }

  RMV j_phi(const RDF& a) const { return a.degree() < 1 ? RMV(3, a.degree() - 1, n_) : minus_sharp(interior(V(), a)); }

  RDF p_phi(const RMV& w) const {
    if (w.degree() < 1) return RDF(3, w.degree(), n_);
    return wedge(df(), minus_omega_flat(contract_covector(df(), w)));
  }

  RDF p_V(const RMV& w) const { return wedge(df(), minus_omega_flat(w)); }

  RMV j_V(const RDF& a) const {
    if (a.degree() < 1) return RMV(3, a.degree(), n_);
    return wedge(V(), minus_sharp(interior(V(), a)));
  }

  /// Polynomial sum_i coeffs[i] f^i and its f-derivative.
  Polynomial in_f(const std::vector<Polynomial>& coeffs) const {
    Polynomial out(n_);
    Polynomial pw = c(1);
    for (const auto& a : coeffs) {
      out += a * pw;
      pw *= f();
    }
    return out;
  }
  Polynomial d_in_f(const std::vector<Polynomial>& coeffs) const {
    std::vector<Polynomial> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(Rational(static_cast<long>(i)) * coeffs[i]);
    return d.empty() ? Polynomial(n_) : in_f(d);
  }

 private:
  int n_;
  SignLedger ledger_;
};

namespace detail {

template <class S, Variance V>
IdentityCheck make_check(std::string id, std::string statement, Domain domain, const GradedTensor<S, V>& residual) {
  IdentityCheck c{std::move(id), std::move(statement), domain, residual.is_zero(), {}};
  if (!c.pass) c.witness = first_component(residual);
  return c;
}

inline std::vector<std::vector<int>> all_subsets3() {
  std::vector<std::vector<int>> out;
  for (int k = 0; k <= 3; ++k)
    for (Mask m : subsets::all_of_size(3, k)) out.push_back(subsets::indices(m));
  return out;
}

template <class S, Variance V>
std::string basis_name(const std::vector<int>& idx) {
  if (idx.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i > 0) s += "^";
    s += (V == Variance::contravariant ? "d_" : "d");
    s += "xyz"[idx[i]];
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<IdentityCheck> verify_core_fields(const Fields& F = Fields()) {
  using detail::make_check;
  std::vector<IdentityCheck> out;
  const RMV pi = F.pi();
  const RMV T = F.T();
  const RMV NO = F.N_O();
  const RMV NI = F.N_I();
  const RMV W = F.W();
  const RMV fm = F.scalar_mv(F.rf(F.f()));
  const RMV one = F.scalar_mv(F.one());
  out.push_back(make_check("core.01", "L_T pi = 0", Domain::O, lie_derivative(T, pi)));
  out.push_back(make_check("core.02", "L_N pi = 0", Domain::O, lie_derivative(NO, pi)));
  out.push_back(make_check("core.03", "L_N pi = 0", Domain::I, lie_derivative(NI, pi)));
  out.push_back(make_check("core.04", "[N, T] = 0", Domain::O, schouten_bracket(NO, T)));
  out.push_back(make_check("core.05", "L_N f = 1", Domain::O, lie_derivative(NO, fm) - one));
  out.push_back(make_check("core.06", "L_N f = 1", Domain::I, lie_derivative(NI, fm) - one));
  out.push_back(make_check("core.07", "L_T f = 0", Domain::O, lie_derivative(T, fm)));
  out.push_back(make_check("core.08", "pi#(df) = 0", Domain::global, sharp(pi, F.df())));
  out.push_back(make_check("core.09", "T = pi#(dtheta)", Domain::O, T - sharp(pi, F.dtheta())));
  out.push_back(make_check("core.10", "-r^2 z pi#(dtheta) = -z^2 x d_x - z^2 y d_y - r^2 z d_z", Domain::O,
                           F.rf(-F.r2() * F.z()) * sharp(pi, F.dtheta()) - W));
  out.push_back(make_check("core.11", "L_W f = 0", Domain::global, lie_derivative(W, fm)));
  out.push_back(make_check("core.12", "L_W R^2 = -4 r^2 z^2", Domain::global,
                           lie_derivative(W, F.scalar_mv(F.rf(F.R2()))) - F.scalar_mv(F.rf(F.c(-4) * F.r2() * F.z() * F.z()))));
  out.push_back(make_check("core.13", "dtheta(W) = 0", Domain::O, interior(W, F.dtheta())));
  return out;
}

inline std::vector<IdentityCheck> verify_charts(const Fields& F = Fields()) {
  using detail::make_check;
  std::vector<IdentityCheck> out;
  const RMV pi = F.pi();
  const RMV st = sharp(pi, F.dtheta());
  const RMV sx = sharp(pi, F.dxi());
  const RDF one = F.scalar_form(F.one());
  out.push_back(make_check("chart.01", "dw(pi#(dtheta)) = 1", Domain::O, interior(st, F.dw()) - one));
  out.push_back(make_check("chart.02", "df(pi#(dtheta)) = 0", Domain::O, interior(st, F.df())));
  out.push_back(make_check("chart.03", "dv(pi#(dxi)) = 1", Domain::I, interior(sx, F.dv()) - one));
  out.push_back(make_check("chart.04", "df(pi#(dxi)) = 0", Domain::I, interior(sx, F.df())));
  out.push_back(make_check("chart.05", "dtheta(N) = 0", Domain::O, interior(F.N_O(), F.dtheta())));
  out.push_back(make_check("chart.06", "dw(N) = 0", Domain::O, interior(F.N_O(), F.dw())));
  out.push_back(make_check("chart.07", "dxi(N) = 0", Domain::I, interior(F.N_I(), F.dxi())));
  out.push_back(make_check("chart.08", "dv(N) = 0", Domain::I, interior(F.N_I(), F.dv())));
  out.push_back(make_check("chart.09", "d(dtheta) = 0", Domain::O, exterior_derivative(F.dtheta())));
  out.push_back(make_check("chart.10", "d(dxi) = 0", Domain::I, exterior_derivative(F.dxi())));
  return out;
}

/// Sign s with p_df(N ^ T) = s df ^ dtheta (0 if neither sign works).
inline int p_phi_of_NT_sign(const Fields& F = Fields()) {
  const RDF lhs = F.p_phi(wedge(F.N_O(), F.T()));
  const RDF target = wedge(F.df(), F.dtheta());
  if ((lhs - target).is_zero()) return 1;
  if ((lhs + target).is_zero()) return -1;
  return 0;
}

inline std::vector<IdentityCheck> verify_dual_map_relations(const Fields& F = Fields()) {
  using detail::make_check;
  std::vector<IdentityCheck> out;
  out.push_back(make_check("dual.01", "df(V) = 1", Domain::global, interior(F.V(), F.df()) - F.scalar_form(F.one())));
  out.push_back(make_check("dual.02", "i_V omega~ = 0", Domain::global, interior(F.V(), F.omega())));

  // relations on forms: inputs df ^ beta for constant basis beta
  std::vector<std::pair<std::string, RDF>> forms;
  for (const auto& idx : detail::all_subsets3()) {
    if (idx.size() == 3) continue;
    forms.emplace_back("df^" + detail::basis_name<RF, Variance::covariant>(idx), wedge(F.df(), RDF::basis(3, idx, F.one())));
  }
  std::vector<std::pair<std::string, RMV>> mvs;
  for (const auto& idx : detail::all_subsets3())
    mvs.emplace_back(detail::basis_name<RF, Variance::contravariant>(idx), RMV::basis(3, idx, F.one()));

  auto on_forms = [&](const std::string& id, const std::string& statement, auto residual) {
    IdentityCheck c{id, statement, Domain::global, true, {}};
    for (const auto& [name, a] : forms) {
      const RDF r = residual(a);
      if (!r.is_zero()) {
        c.pass = false;
        c.witness = "on " + name + ": " + first_component(r);
        break;
      }
    }
    out.push_back(c);
  };
  on_forms("dual.03", "p_V o j_V = 0", [&](const RDF& a) { return F.p_V(F.j_V(a)); });
  on_forms("dual.04", "p_V o j_phi = Id", [&](const RDF& a) { return F.p_V(F.j_phi(a)) - a; });
  on_forms("dual.05", "p_phi o j_V = Id", [&](const RDF& a) { return F.p_phi(F.j_V(a)) - a; });
  {
    IdentityCheck c{"dual.06", "Id = j_V o p_phi + j_phi o p_V", Domain::global, true, {}};
    for (const auto& [name, w] : mvs) {
      RMV r = F.j_V(F.p_phi(w));
      r += F.j_phi(F.p_V(w));
      r -= w;
      if (!r.is_zero()) {
        c.pass = false;
        c.witness = "on " + name + ": " + first_component(r);
        break;
      }
    }
    out.push_back(c);
  }
  out.push_back(make_check("dual.07", "(j_V o p_phi + j_phi o p_V)(d_x^d_y) = d_x^d_y", Domain::global,
                           F.j_V(F.p_phi(RMV::basis(3, {0, 1}, F.one()))) + F.j_phi(F.p_V(RMV::basis(3, {0, 1}, F.one()))) -
                               RMV::basis(3, {0, 1}, F.one())));
  out.push_back(make_check("dual.08", "p_df(N) = df", Domain::O, F.p_phi(F.N_O()) - F.df()));
  out.push_back(make_check("dual.09", "j_df(df^dtheta) = -pi#(dtheta) = -T", Domain::O,
                           F.j_phi(wedge(F.df(), F.dtheta())) + F.T()));
  const int s = p_phi_of_NT_sign(F);
  IdentityCheck nt{"dual.10", "p_df(N^T) = s df^dtheta with s = -1", Domain::O, s == -1, {}};
  if (!nt.pass) nt.witness = s == 0 ? "p_df(N^T) is not a multiple of df^dtheta" : "s = +1";
  out.push_back(nt);
  return out;
}

inline std::vector<IdentityCheck> verify_involution_and_transversals(const Fields& F = Fields()) {
  using detail::make_check;
  std::vector<IdentityCheck> out;
  const LinearMap tau = LinearMap::diagonal({1, -1, -1});
  const Multivector<Polynomial> pi = build_linear_poisson(algebras::sl2());
  out.push_back(make_check("tau.01", "tau_*(pi) = pi", Domain::global, pushforward(tau, pi) - pi));
  {
    const bool ok = tau * tau == LinearMap::identity(3);
    out.push_back({"tau.02", "tau o tau = id", Domain::global, ok, ok ? "" : "tau^2 differs from the identity"});
  }
  {
    const Polynomial fx = F.f();
    const std::vector<Polynomial> subs{F.x(), -F.y(), -F.z()};
    Multivector<Polynomial> r = Multivector<Polynomial>::scalar(3, fx.compose(subs) - fx);
    out.push_back(make_check("tau.03", "f o tau = f", Domain::global, r));
  }
  // gamma_1(t) = (0, -t-1, 1-t)/2 and gamma_2 = -gamma_1, as polynomials in t
  const Polynomial t = Polynomial::variable(1, 0);
  const Polynomial half = Polynomial::constant(1, Rational(1, 2));
  const Polynomial one = Polynomial::constant(1, 1);
  const std::vector<Polynomial> g1{Polynomial(1), half * (-t - one), half * (one - t)};
  const std::vector<Polynomial> g2{Polynomial(1), -g1[1], -g1[2]};
  const Polynomial f3 = Fields(3).f();
  const Polynomial r1 = f3.compose(g1) - t;
  const Polynomial r2 = f3.compose(g2) - t;
  out.push_back({"tau.04", "f o gamma_1(t) = t", Domain::global, r1.is_zero(), r1.is_zero() ? "" : r1.to_string({"t"})});
  out.push_back({"tau.05", "f o gamma_2(t) = t", Domain::global, r2.is_zero(), r2.is_zero() ? "" : r2.to_string({"t"})});
  return out;
}

/// Bracket relations with p(f) = p0 + p1 f + p2 f^2 + p3 f^3 and q(f) likewise,
/// where p_i, q_i are extra polynomial variables.
inline std::vector<IdentityCheck> verify_bracket_relations_polynomial_stand_ins() {
  using detail::make_check;
  std::vector<IdentityCheck> out;
  constexpr int kDeg = 3;
  const Fields F(3 + 2 * (kDeg + 1));
  std::vector<Polynomial> pc;
  std::vector<Polynomial> qc;
  for (int i = 0; i <= kDeg; ++i) {
    pc.push_back(Polynomial::variable(F.nvars(), 3 + i));
    qc.push_back(Polynomial::variable(F.nvars(), 3 + kDeg + 1 + i));
  }
  const RF p = F.rf(F.in_f(pc));
  const RF q = F.rf(F.in_f(qc));
  const RF dp = F.rf(F.d_in_f(pc));
  const RF dq = F.rf(F.d_in_f(qc));
  const RMV N = F.N_O();
  const RMV T = F.T();
  const RMV NT = wedge(N, T);
  const RMV pi = F.pi();

  out.push_back(make_check("bracket.01", "[p(f) N, q(f) N^T] = (p q' - q p')(f) N^T", Domain::O,
                           schouten_bracket(p * N, q * NT) - (p * dq - q * dp) * NT));
  out.push_back(make_check("bracket.02", "[p(f) N, q(f) T] = p q'(f) T", Domain::O, schouten_bracket(p * N, q * T) - (p * dq) * T));
  out.push_back(make_check("bracket.03", "[N, p(f)] = p'(f)", Domain::O, schouten_bracket(N, F.scalar_mv(p)) - F.scalar_mv(dp)));
  out.push_back(make_check("bracket.04", "[T, p(f)] = 0", Domain::O, schouten_bracket(T, F.scalar_mv(p))));
  const RMV pip = pi + p * NT;
  out.push_back(make_check("bracket.05", "[pi + p(f) N^T, pi + p(f) N^T] = 0", Domain::O, schouten_bracket(pip, pip)));

  // concrete instances
  const Fields G;
  const RF f = G.rf(G.f());
  const RMV N3 = G.N_O();
  const RMV NT3 = wedge(N3, G.T());
  out.push_back(make_check("bracket.06", "[N, f^2] = 2f", Domain::O,
                           schouten_bracket(N3, G.scalar_mv(f * f)) - G.scalar_mv(G.rf(G.c(2)) * f)));
  const RMV pif = G.pi() + f * NT3;
  out.push_back(make_check("bracket.07", "[pi + f N^T, pi + f N^T] = 0", Domain::O, schouten_bracket(pif, pif)));
  out.push_back(make_check("bracket.08", "[f N, f^2 N^T] = f^2 N^T", Domain::O, schouten_bracket(f * N3, (f * f) * NT3) - (f * f) * NT3));
  return out;
}

/// Signs eps_k with mu_flat(d_pi P) = eps_k delta_pi(mu_flat P), k = 0..3.
inline constexpr int kMuFlatSigns[4] = {-1, 1, -1, 1};

inline std::vector<IdentityCheck> verify_homology_duality(std::uint64_t seed = 20260301ULL) {
  using detail::make_check;
  using PMV = Multivector<Polynomial>;
  using PDF = DifferentialForm<Polynomial>;
  std::vector<IdentityCheck> out;
  const PMV pi = build_linear_poisson(algebras::sl2());
  const Polynomial x = Polynomial::variable(3, 0);
  const Polynomial y = Polynomial::variable(3, 1);
  const Polynomial z = Polynomial::variable(3, 2);
  PDF half_df = PDF::basis(3, {0}, x) + PDF::basis(3, {1}, y) + PDF::basis(3, {2}, -z);
  out.push_back(make_check("duality.01", "mu_flat(pi) = df/2", Domain::global, mu_flat(pi) - half_df));
  const PDF x2dy = PDF::basis(3, {1}, x * x);
  out.push_back(make_check("duality.02", "(d delta_pi + delta_pi d)(x^2 dy) = 0", Domain::global,
                           exterior_derivative(koszul_differential(pi, x2dy)) + koszul_differential(pi, exterior_derivative(x2dy))));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> expo(0, 3);
  auto random_poly = [&] {
    Polynomial p(3);
    for (int t = 0; t < 4; ++t) {
      const int e[3] = {expo(rng), expo(rng), expo(rng)};
      p.add_term(Monomial::from_exponents(std::span<const int>(e, 3)), coef(rng));
    }
    return p;
  };
  auto random_form = [&](int k) {
    PDF w(3, k, 3);
    for (Mask m : subsets::all_of_size(3, k)) w.add(m, random_poly());
    return w;
  };
  auto random_mv = [&](int k) {
    PMV w(3, k, 3);
    for (Mask m : subsets::all_of_size(3, k)) w.add(m, random_poly());
    return w;
  };
  constexpr int kSamples = 12;
  {
    IdentityCheck anti{"duality.03", "d delta_pi + delta_pi d = 0 on random polynomial forms", Domain::global, true, {}};
    IdentityCheck sq{"duality.04", "delta_pi o delta_pi = 0 on random polynomial forms", Domain::global, true, {}};
    for (int s = 0; s < kSamples; ++s) {
      const PDF w = random_form(s % 4);
      const PDF a = exterior_derivative(koszul_differential(pi, w)) + koszul_differential(pi, exterior_derivative(w));
      if (anti.pass && !a.is_zero()) {
        anti.pass = false;
        anti.witness = first_component(a);
      }
      const PDF b = koszul_differential(pi, koszul_differential(pi, w));
      if (sq.pass && !b.is_zero()) {
        sq.pass = false;
        sq.witness = first_component(b);
      }
    }
    out.push_back(anti);
    out.push_back(sq);
  }
  for (int k = 0; k <= 2; ++k) {
    IdentityCheck c{"duality.0" + std::to_string(5 + k),
                    "mu_flat(d_pi P) = (" + std::to_string(kMuFlatSigns[k]) + ") delta_pi(mu_flat P) for random " + std::to_string(k) +
                        "-vectors P",
                    Domain::global, true, {}};
    for (int s = 0; s < kSamples && c.pass; ++s) {
      const PMV p = random_mv(k);
      const PDF r = mu_flat(poisson_differential(pi, p)) - Rational(kMuFlatSigns[k]) * koszul_differential(pi, mu_flat(p));
      if (!r.is_zero()) {
        c.pass = false;
        c.witness = first_component(r);
      }
    }
    out.push_back(c);
  }
  const PMV top = PMV::basis(3, {0, 1, 2}, Polynomial::constant(3, 1));
  out.push_back(make_check("duality.08", "delta_pi(dx^dy^dz) = mu_flat(d_pi(d_x^d_y^d_z)) = 0", Domain::global,
                           koszul_differential(pi, volume_form<Polynomial>(3, 3)) + mu_flat(poisson_differential(pi, top))));
  return out;
}

struct Report {
  std::vector<IdentityCheck> checks;
  int p_df_NT_sign = 0;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
  }
};

inline Report run_suite(SignLedger ledger = {}) {
  const Fields F(3, ledger);
  Report r;
  for (auto&& group : {verify_core_fields(F), verify_charts(F), verify_dual_map_relations(F), verify_involution_and_transversals(F),
                       verify_bracket_relations_polynomial_stand_ins(), verify_homology_duality()})
    r.checks.insert(r.checks.end(), group.begin(), group.end());
  std::sort(r.checks.begin(), r.checks.end(), [](const IdentityCheck& a, const IdentityCheck& b) { return a.id < b.id; });
  r.p_df_NT_sign = p_phi_of_NT_sign(F);
  return r;
}

inline nlohmann::json to_json(const Report& r, const SignLedger& ledger = {}) {
  nlohmann::json doc;
  doc["suite"] = "sl2";
  doc["all_pass"] = r.all_pass();
  doc["sign_ledger"] = {{"flip_omega", ledger.flip_omega},
                        {"p_df_NT_sign", r.p_df_NT_sign},
                        {"mu_flat_signs", std::vector<int>(std::begin(kMuFlatSigns), std::end(kMuFlatSigns))}};
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    doc["checks"].push_back(
        {{"id", c.id}, {"statement", c.statement}, {"domain", to_string(c.domain)}, {"pass", c.pass}, {"witness", c.witness}});
  return doc;
}

inline std::string to_text(const Report& r) {
  std::string s;
  for (const auto& c : r.checks) {
    s += (c.pass ? "PASS  " : "FAIL  ") + c.id + "  [" + to_string(c.domain) + "]  " + c.statement;
    if (!c.pass) s += "  witness: " + c.witness;
    s += '\n';
  }
  s += r.all_pass() ? "all identities hold\n" : "some identities FAILED\n";
  return s;
}

}  // namespace poisson::sl2
