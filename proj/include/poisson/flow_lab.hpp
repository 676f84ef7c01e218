#pragma once

// Double-precision laboratory for the flow of
//   W = -z^2 x d/dx - z^2 y d/dy - (x^2+y^2) z d/dz,
// the retraction onto X = {x=y=0} u {z=0}, the homotopy operators built from
// the flow, S^1-averaging, the eta N^T deformation and the g_t estimates.

#include "poisson/dual.hpp"
#include "poisson/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace poisson::flow {

template <class S>
using Vec3 = std::array<S, 3>;
template <class S>
using Mat3 = std::array<std::array<S, 3>, 3>;
using Point3 = Vec3<double>;

struct Tolerances {
  double kappa_series_threshold = 1e-4;
  double oracle_agreement = 1e-8;     // closed form vs RK4
  double f_conservation = 1e-12;      // relative to 1 + |f|
  double semigroup = 1e-10;
  double ad_vs_fd = 1e-6;             // relative to the largest entry
  double convergence = 1e-6;          // |phi_10(p) - p_X(p)|
  double cone = 1e-10;
  double homotopy = 1e-6;
  double closed = 1e-8;
  double tail = 1e-6;                 // integrand size at the truncation time
  double estimate_identity = 1e-12;   // relative
  double estimate_inequality = 1e-13; // relative slack for rounding in the equality cases
  double refinement = 0.05;
  double deformation = 1e-10;
  double negative_control = 1e-3;
  double invariance = 1e-12;
  double min_abs_f = 0.1;             // homotopy evaluation points
  double max_radius = 2.0;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t;
  return t;
}

template <class S> S r2(const Vec3<S>& p) { return p[0] * p[0] + p[1] * p[1]; }
template <class S> S R2(const Vec3<S>& p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; }
template <class S> S f_of(const Vec3<S>& p) { return p[0] * p[0] + p[1] * p[1] - p[2] * p[2]; }

inline double norm_l1(const Point3& a, const Point3& b) {
  return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]);
}
inline double norm_max(const Point3& a, const Point3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

// ---------------------------------------------------------------- kappa, g

/// kappa(x) = int_0^2 exp(-s x) ds = (1 - exp(-2x)) / x.
template <class S>
S kappa(const S& x) {
  using std::expm1;
  if (std::abs(value_of(x)) >= default_tolerances().kappa_series_threshold) return -expm1(-2.0 * x) / x;
  return 2.0 - 2.0 * x + (4.0 / 3.0) * x * x - (2.0 / 3.0) * x * x * x + (4.0 / 15.0) * x * x * x * x;
}

/// 1/sqrt(1 + a kappa(x)), rewritten for x < 0 so that exp(-2x) never overflows.
template <class S>
S g_kernel(const S& a, const S& x) {
  using std::exp;
  using std::sqrt;
  if (value_of(x) >= 0) return 1.0 / sqrt(1.0 + a * kappa(x));
  const S e = exp(x);
  return e / sqrt(e * e + a * kappa(-1.0 * x));
}

/// g_t = 1/sqrt(1 + t z^2 kappa(t f)).
template <class S>
S g_t(const Vec3<S>& p, double t) {
  return g_kernel<S>(t * p[2] * p[2], t * f_of(p));
}

/// gbar_t = 1/sqrt(1 + t r^2 kappa(-t f)).
template <class S>
S gbar_t(const Vec3<S>& p, double t) {
  return g_kernel<S>(t * r2(p), -t * f_of(p));
}

// ---------------------------------------------------------------- flow

template <class S>
Vec3<S> vector_field_W(const Vec3<S>& p) {
  const S z2 = p[2] * p[2];
  return {-1.0 * z2 * p[0], -1.0 * z2 * p[1], -1.0 * r2(p) * p[2]};
}

/// Closed-form flow of W; forward complete, so t >= 0.
template <class S>
Vec3<S> flow_closed(const Vec3<S>& p, double t) {
  if (t < 0) throw std::domain_error("flow_closed: t must be non-negative");
  const S g = g_t(p, t);
  const S gb = gbar_t(p, t);
  return {p[0] * g, p[1] * g, p[2] * gb};
}

/// Classical RK4 integration of W; independent of the closed form.
inline Point3 flow_rk4(const Point3& p, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("flow_rk4: steps must be >= 1");
  const double h = t / steps;
  Point3 y = p;
  auto add = [](const Point3& a, const Point3& b, double s) {
    return Point3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  for (int i = 0; i < steps; ++i) {
    const Point3 k1 = vector_field_W(y);
    const Point3 k2 = vector_field_W(add(y, k1, h / 2));
    const Point3 k3 = vector_field_W(add(y, k2, h / 2));
    const Point3 k4 = vector_field_W(add(y, k3, h));
    for (int c = 0; c < 3; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  return y;
}

/// p_X: (x sqrt(f)/r, y sqrt(f)/r, 0) on f > 0, origin on the cone,
/// (0, 0, sign(z) sqrt(-f)) on f < 0.
template <class S>
Vec3<S> retraction(const Vec3<S>& p) {
  using std::sqrt;
  const S f = f_of(p);
  const double fv = value_of(f);
  if (fv > 0) {
    const S s = sqrt(f) / sqrt(r2(p));
    return {p[0] * s, p[1] * s, S(0.0)};
  }
  if (fv < 0) {
    const S s = sqrt(-1.0 * f);
    return {S(0.0), S(0.0), value_of(p[2]) > 0 ? s : -1.0 * s};
  }
  return {S(0.0), S(0.0), S(0.0)};
}

/// Value and Jacobian J[i][j] = d fn_i / d x_j by forward-mode AD.
template <class S, class Fn>
std::pair<Vec3<S>, Mat3<S>> value_and_jacobian(Fn&& fn, const Vec3<S>& p) {
  using D = Dual<S, 3>;
  const Vec3<D> q{D::variable(p[0], 0), D::variable(p[1], 1), D::variable(p[2], 2)};
  const Vec3<D> out = fn(q);
  std::pair<Vec3<S>, Mat3<S>> r;
  for (int i = 0; i < 3; ++i) {
    r.first[i] = out[i].v;
    for (int j = 0; j < 3; ++j) r.second[i][j] = out[i].d[j];
  }
  return r;
}

inline Mat3<double> flow_jacobian(const Point3& p, double t) {
  return value_and_jacobian([t](const auto& q) { return flow_closed(q, t); }, p).second;
}

inline Mat3<double> flow_jacobian_fd(const Point3& p, double t, double step = 1e-6) {
  Mat3<double> J{};
  for (int j = 0; j < 3; ++j) {
    Point3 a = p, b = p;
    a[j] += step;
    b[j] -= step;
    const Point3 fa = flow_closed(a, t), fb = flow_closed(b, t);
    for (int i = 0; i < 3; ++i) J[i][j] = (fa[i] - fb[i]) / (2 * step);
  }
  return J;
}

struct ConvergenceProbe {
  std::vector<double> distances;  // l1 distance |phi_t(p) - p_X(p)| per t
  std::optional<double> jacobian_gap;  // max |D phi_t - D p_X| at the last t, when |f| >= 0.5
};

inline ConvergenceProbe convergence_probe(const Point3& p, const std::vector<double>& ts) {
  ConvergenceProbe out;
  const Point3 limit = retraction(p);
  for (double t : ts) out.distances.push_back(norm_l1(flow_closed(p, t), limit));
  if (!ts.empty() && std::abs(f_of(p)) >= 0.5) {
    const auto Jf = flow_jacobian(p, ts.back());
    const auto Jr = value_and_jacobian([](const auto& q) { return retraction(q); }, p).second;
    double gap = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gap = std::max(gap, std::abs(Jf[i][j] - Jr[i][j]));
    out.jacobian_gap = gap;
  }
  return out;
}

// ---------------------------------------------------------------- forms at a point

/// A differential form on R^3 at one point; coefficient c[mask] multiplies
/// dx_I with I the set bits of mask (dx = 1, dy = 2, dz = 4).
template <class S>
struct FormAt {
  int degree = 0;
  std::array<S, 8> c{};

  static FormAt zero(int k) {
    FormAt r;
    r.degree = k;
    for (auto& x : r.c) x = S(0.0);
    return r;
  }
  static FormAt one_form(const S& a, const S& b, const S& e) {
    FormAt r = zero(1);
    r.c[1] = a;
    r.c[2] = b;
    r.c[4] = e;
    return r;
  }
  FormAt& operator+=(const FormAt& o) {
    for (int i = 0; i < 8; ++i) c[i] += o.c[i];
    return *this;
  }
  FormAt& operator-=(const FormAt& o) {
    for (int i = 0; i < 8; ++i) c[i] -= o.c[i];
    return *this;
  }
  FormAt& operator*=(const S& s) {
    for (auto& x : c) x *= s;
    return *this;
  }
};

template <class S> FormAt<S> operator+(FormAt<S> a, const FormAt<S>& b) { return a += b; }
template <class S> FormAt<S> operator-(FormAt<S> a, const FormAt<S>& b) { return a -= b; }
template <class S> FormAt<S> operator*(const S& s, FormAt<S> a) { return a *= s; }

inline int popcount3(int m) { return (m & 1) + ((m >> 1) & 1) + ((m >> 2) & 1); }

/// Sign of moving the ordered set a in front of b into ascending order.
inline int merge_sign(int a, int b) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    if (a & (1 << i))
      for (int j = 0; j < i; ++j)
        if (b & (1 << j)) ++inversions;
  return inversions % 2 ? -1 : 1;
}

template <class S>
FormAt<S> wedge(const FormAt<S>& a, const FormAt<S>& b) {
  FormAt<S> r = FormAt<S>::zero(a.degree + b.degree);
  for (int I = 0; I < 8; ++I) {
    if (popcount3(I) != a.degree) continue;
    for (int J = 0; J < 8; ++J) {
      if (popcount3(J) != b.degree || (I & J)) continue;
      r.c[I | J] += static_cast<double>(merge_sign(I, J)) * (a.c[I] * b.c[J]);
    }
  }
  return r;
}

/// i_v as a left derivation.
template <class S>
FormAt<S> interior(const Vec3<S>& v, const FormAt<S>& a) {
  if (a.degree == 0) throw std::invalid_argument("interior of a 0-form");
  FormAt<S> r = FormAt<S>::zero(a.degree - 1);
  for (int I = 0; I < 8; ++I) {
    if (popcount3(I) != a.degree) continue;
    int pos = 0;
    for (int i = 0; i < 3; ++i) {
      if (!(I & (1 << i))) continue;
      r.c[I & ~(1 << i)] += static_cast<double>(pos % 2 ? -1 : 1) * (v[i] * a.c[I]);
      ++pos;
    }
  }
  return r;
}

template <class S>
S minor_det(const Mat3<S>& J, int rows, int cols) {
  int ri[3], ci[3], k = 0, m = 0;
  for (int i = 0; i < 3; ++i) {
    if (rows & (1 << i)) ri[k++] = i;
    if (cols & (1 << i)) ci[m++] = i;
  }
  if (k == 0) return S(1.0);
  if (k == 1) return J[ri[0]][ci[0]];
  if (k == 2) return J[ri[0]][ci[0]] * J[ri[1]][ci[1]] - J[ri[0]][ci[1]] * J[ri[1]][ci[0]];
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

/// Pullback by a map with Jacobian J of a form whose coefficients are taken at the image point.
template <class S>
FormAt<S> pullback(const Mat3<S>& J, const FormAt<S>& at_image) {
  FormAt<S> r = FormAt<S>::zero(at_image.degree);
  for (int I = 0; I < 8; ++I) {
    if (popcount3(I) != at_image.degree) continue;
    for (int K = 0; K < 8; ++K)
      if (popcount3(K) == at_image.degree) r.c[I] += at_image.c[K] * minor_det(J, K, I);
  }
  return r;
}

/// d of a form whose coefficients carry gradients.
template <class S>
FormAt<S> exterior_derivative(const FormAt<Dual<S, 3>>& a) {
  FormAt<S> r = FormAt<S>::zero(a.degree + 1);
  for (int I = 0; I < 8; ++I) {
    if (popcount3(I) != a.degree) continue;
    for (int j = 0; j < 3; ++j) {
      if (I & (1 << j)) continue;
      r.c[I | (1 << j)] += static_cast<double>(merge_sign(1 << j, I)) * a.c[I].d[j];
    }
  }
  return r;
}

template <class S>
FormAt<S> value_part(const FormAt<Dual<S, 3>>& a) {
  FormAt<S> r;
  r.degree = a.degree;
  for (int i = 0; i < 8; ++i) r.c[i] = a.c[i].v;
  return r;
}

inline double max_norm(const FormAt<double>& a) {
  double m = 0;
  for (double x : a.c) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------- catalog

/// Fixed catalog of S^1-invariant forms flat at the origin:
///   a0 = chi df,  a1 = chi df ^ (-y dx + x dy),  a2 = eta(f) df ^ dtheta,
/// with chi = exp(-1/R^2) and eta(u) = exp(-1/u) for u > 0, else 0.
enum class Form { a0, a1, a2 };

inline std::string to_string(Form a) {
  switch (a) {
    case Form::a0: return "a0";
    case Form::a1: return "a1";
    case Form::a2: return "a2";
  }
  return "?";
}

inline Form parse_form(const std::string& s) {
  if (s == "a0") return Form::a0;
  if (s == "a1") return Form::a1;
  if (s == "a2") return Form::a2;
  throw std::invalid_argument("unknown form '" + s + "' (expected a0, a1 or a2)");
}

inline int degree(Form a) { return a == Form::a0 ? 1 : 2; }

namespace detail {

/// exp(-1/u) for u > 0, else 0; returns the value and the derivative.
template <class S>
std::pair<S, S> flat_bump(const S& u) {
  using std::exp;
  if (value_of(u) <= 0) return {S(0.0), S(0.0)};
  const S e = exp(-1.0 / u);
  return {e, e / (u * u)};
}

template <class S> FormAt<S> df(const Vec3<S>& p) { return FormAt<S>::one_form(2.0 * p[0], 2.0 * p[1], -2.0 * p[2]); }
template <class S> FormAt<S> dR2(const Vec3<S>& p) { return FormAt<S>::one_form(2.0 * p[0], 2.0 * p[1], 2.0 * p[2]); }
template <class S> FormAt<S> beta(const Vec3<S>& p) { return FormAt<S>::one_form(-1.0 * p[1], p[0], S(0.0)); }

}  // namespace detail

template <class S>
FormAt<S> evaluate(Form a, const Vec3<S>& p) {
  using detail::beta;
  using detail::df;
  switch (a) {
    case Form::a0: return detail::flat_bump(R2(p)).first * df(p);
    case Form::a1: return detail::flat_bump(R2(p)).first * wedge(df(p), beta(p));
    case Form::a2: {
      const S rr = r2(p);
      if (value_of(rr) == 0) throw std::domain_error("a2 is only evaluated off the z-axis");
      const S eta = detail::flat_bump(f_of(p)).first;
      return (eta / rr) * wedge(df(p), beta(p));
    }
  }
  throw std::logic_error("evaluate");
}

/// Closed-form exterior derivative of the catalog forms.
template <class S>
FormAt<S> evaluate_d(Form a, const Vec3<S>& p) {
  using detail::beta;
  using detail::df;
  using detail::dR2;
  switch (a) {
    case Form::a0: return detail::flat_bump(R2(p)).second * wedge(dR2(p), df(p));
    case Form::a1: {
      const auto [chi, dchi] = detail::flat_bump(R2(p));
      const FormAt<S> dbeta = [] {
        FormAt<S> r = FormAt<S>::zero(2);
        r.c[3] = S(2.0);
        return r;
      }();
      return dchi * wedge(wedge(dR2(p), df(p)), beta(p)) - chi * wedge(df(p), dbeta);
    }
    case Form::a2:
      if (value_of(r2(p)) == 0) throw std::domain_error("a2 is only evaluated off the z-axis");
      return FormAt<S>::zero(3);
  }
  throw std::logic_error("evaluate_d");
}

/// phi_s^* alpha at p.
template <class S>
FormAt<S> pulled_back(Form a, const Vec3<S>& p, double s) {
  const auto [image, J] = value_and_jacobian([s](const auto& q) { return flow_closed(q, s); }, p);
  return pullback(J, evaluate(a, image));
}

/// p_X^* alpha at p (p off the cone).
template <class S>
FormAt<S> retracted(Form a, const Vec3<S>& p) {
  if (value_of(f_of(p)) == 0) throw std::domain_error("p_X is not smooth on the cone");
  const auto [image, J] = value_and_jacobian([](const auto& q) { return retraction(q); }, p);
  if (a == Form::a2 && value_of(r2(image)) == 0) return FormAt<S>::zero(2);  // eta(f) = 0 on I
  return pullback(J, evaluate(a, image));
}

// ---------------------------------------------------------------- homotopy

/// Composite Gauss-Legendre over [0, T] with `panels_per_unit` panels of 20 nodes per unit time.
struct QuadratureSpec {
  double T = 50;
  int panels_per_unit = 1;

  int panels() const { return static_cast<int>(std::ceil(T * panels_per_unit - 1e-9)); }
  int nodes() const { return panels() * 20; }
};

inline const std::vector<std::pair<double, double>>& gauss_legendre_20() {
  static const std::vector<std::pair<double, double>> rule = [] {
    using G = boost::math::quadrature::gauss<double, 20>;
    std::vector<std::pair<double, double>> r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        r.emplace_back(0.0, w[i]);
      } else {
        r.emplace_back(-x[i], w[i]);
        r.emplace_back(x[i], w[i]);
      }
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

/// i_W phi_s^* alpha at p.
template <class S>
FormAt<S> homotopy_integrand(Form a, const Vec3<S>& p, double s) {
  return interior(vector_field_W(p), pulled_back(a, p, s));
}

template <class S>
FormAt<S> homotopy_integrand_d(Form a, const Vec3<S>& p, double s) {
  const auto [image, J] = value_and_jacobian([s](const auto& q) { return flow_closed(q, s); }, p);
  return interior(vector_field_W(p), pullback(J, evaluate_d(a, image)));
}

template <class S>
struct HomotopyValue {
  FormAt<S> h;
  double tail = 0;  // max-norm of the integrand at time T
};

namespace detail {
template <class S, class Integrand>
HomotopyValue<S> integrate(int out_degree, const QuadratureSpec& quad, Integrand&& integrand) {
  if (!(quad.T > 0) || quad.panels_per_unit < 1) throw std::invalid_argument("quadrature: need T > 0 and panels >= 1");
  HomotopyValue<S> r;
  r.h = FormAt<S>::zero(out_degree);
  const int n = quad.panels();
  const double width = quad.T / n;
  for (int k = 0; k < n; ++k) {
    const double mid = (k + 0.5) * width;
    for (const auto& [x, w] : gauss_legendre_20()) {
      FormAt<S> v = integrand(mid + 0.5 * width * x);
      v *= S(0.5 * width * w);
      r.h += v;
    }
  }
  const FormAt<S> end = integrand(quad.T);
  for (const auto& x : end.c) r.tail = std::max(r.tail, std::abs(value_of(x)));
  return r;
}
}  // namespace detail

/// h_T(alpha) = int_0^T i_W phi_s^* alpha ds at p.
template <class S>
HomotopyValue<S> homotopy_h(Form a, const Vec3<S>& p, const QuadratureSpec& quad = {}) {
  return detail::integrate<S>(degree(a) - 1, quad, [&](double s) { return homotopy_integrand(a, p, s); });
}

/// h_T(d alpha) at p.
template <class S>
HomotopyValue<S> homotopy_h_of_d(Form a, const Vec3<S>& p, const QuadratureSpec& quad = {}) {
  return detail::integrate<S>(degree(a), quad, [&](double s) { return homotopy_integrand_d(a, p, s); });
}

/// Reason why p is outside the evaluation domain of the homotopy check, if it is.
inline std::optional<std::string> homotopy_domain_issue(Form a, const Point3& p, const Tolerances& tol = default_tolerances()) {
  std::ostringstream os;
  if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) os << "non-finite coordinates";
  else if (a == Form::a2 && r2(p) == 0) os << "a2 is not evaluated on the z-axis";
  else if (std::abs(f_of(p)) < tol.min_abs_f) os << "|f| = " << std::abs(f_of(p)) << " < " << tol.min_abs_f;
  else if (std::sqrt(R2(p)) > tol.max_radius) os << "R = " << std::sqrt(R2(p)) << " > " << tol.max_radius;
  else return std::nullopt;
  return os.str();
}

struct HomotopyResidual {
  double identity = 0;  // |p_X^* a - a - d h(a) - h(d a)|
  double closed = 0;    // |d p_X^* a|
  double tail = 0;      // integrand size at T, max over both integrals
  bool tail_ok = true;
};

inline HomotopyResidual homotopy_residual(Form a, const Point3& p, const QuadratureSpec& quad = {},
                                          const Tolerances& tol = default_tolerances()) {
  using D = Dual<double, 3>;
  using DD = Dual<D, 3>;
  if (a == Form::a2 && r2(p) == 0) throw std::domain_error("a2 is only evaluated off the z-axis");
  if (f_of(p) == 0) throw std::domain_error("homotopy residual is not evaluated on the cone");
  const Vec3<D> pd{D::variable(p[0], 0), D::variable(p[1], 1), D::variable(p[2], 2)};

  const auto h = homotopy_h(a, pd, quad);
  const auto hd = homotopy_h_of_d(a, p, quad);
  FormAt<double> lhs = retracted(a, p) - evaluate(a, p);
  FormAt<double> rhs = exterior_derivative(h.h) + hd.h;

  const Vec3<DD> pdd{DD::variable(pd[0], 0), DD::variable(pd[1], 1), DD::variable(pd[2], 2)};
  const FormAt<D> closed = exterior_derivative(retracted(a, pdd));

  HomotopyResidual r;
  r.identity = max_norm(lhs - rhs);
  for (const auto& x : closed.c) r.closed = std::max(r.closed, std::abs(x.v));
  r.tail = std::max(h.tail, hd.tail);
  r.tail_ok = r.tail <= tol.tail;
  return r;
}

// ---------------------------------------------------------------- averaging

using FormField = std::function<FormAt<double>(const Point3&)>;

/// Rotation by theta about the z-axis.
inline Mat3<double> rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
}

inline Point3 apply(const Mat3<double>& M, const Point3& p) {
  Point3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += M[i][j] * p[j];
  return r;
}

/// Av(alpha) at p: trapezoidal mean of the rotated pullbacks.
inline FormAt<double> average_s1(const FormField& alpha, const Point3& p, int nodes) {
  if (nodes < 8) throw std::invalid_argument("average_s1: need at least 8 nodes");
  FormAt<double> acc;
  for (int k = 0; k < nodes; ++k) {
    const Mat3<double> M = rotation(2 * M_PI * k / nodes);
    FormAt<double> v = pullback(M, alpha(apply(M, p)));
    if (k == 0) acc = FormAt<double>::zero(v.degree);
    acc += v;
  }
  acc *= 1.0 / nodes;
  return acc;
}

inline FormField catalog_field(Form a) {
  return [a](const Point3& p) { return evaluate(a, p); };
}

/// The non-invariant test form x dx.
inline FormAt<double> x_dx(const Point3& p) { return FormAt<double>::one_form(p[0], 0.0, 0.0); }

// ---------------------------------------------------------------- deformation

enum class Deformation {
  none,        // pi
  eta_NT,      // pi + eta(f) N ^ T
  eta_N_dx,    // pi + eta(f) N ^ d/dx (negative control)
};

/// Components (P^{12}, P^{13}, P^{23}) of the deformed bivector, where
/// pi = -z d1^d2 - y d1^d3 + x d2^d3, N = (x d1 + y d2)/(2 r^2) and N ^ T = N ^ d3.
template <class S>
std::array<S, 3> deformed_bivector(const Vec3<S>& p, Deformation kind) {
  std::array<S, 3> P{-1.0 * p[2], -1.0 * p[1], p[0]};
  if (kind == Deformation::none) return P;
  const S rr = r2(p);
  const S eta = detail::flat_bump(f_of(p)).first;
  const S n1 = p[0] / (2.0 * rr), n2 = p[1] / (2.0 * rr);
  if (kind == Deformation::eta_NT) {
    P[1] += eta * n1;
    P[2] += eta * n2;
  } else {
    P[0] -= eta * n2;
  }
  return P;
}

/// Max component of [P, P] at p from the first-derivative coordinate formula
/// [P,P]^{ijk} = 2 sum_l (P^{li} d_l P^{jk} + P^{lj} d_l P^{ki} + P^{lk} d_l P^{ij}).
inline double deformation_jacobi_residual(const Point3& p, Deformation kind) {
  if (kind != Deformation::none && (f_of(p) <= 0 || r2(p) == 0))
    throw std::domain_error("deformation is evaluated on O = {f > 0} only");
  using D = Dual<double, 3>;
  const Vec3<D> q{D::variable(p[0], 0), D::variable(p[1], 1), D::variable(p[2], 2)};
  const auto C = deformed_bivector(q, kind);
  // full antisymmetric matrix
  std::array<std::array<D, 3>, 3> P{};
  P[0][1] = C[0];
  P[0][2] = C[1];
  P[1][2] = C[2];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) P[i][j] = -P[j][i];
  const int i = 0, j = 1, k = 2;
  double s = 0;
  for (int l = 0; l < 3; ++l)
    s += P[l][i].v * P[j][k].d[l] + P[l][j].v * P[k][i].d[l] + P[l][k].v * P[i][j].d[l];
  return std::abs(2 * s);
}

// ---------------------------------------------------------------- estimates

/// sigma_{k,l}(t,R) = sum_{m <= j <= k} t^j R^{2j+l}, m = max(0, ceil(-l/2)).
inline double sigma(int k, int l, double t, double R) {
  const int m = std::max(0, static_cast<int>(std::ceil(-l / 2.0)));
  double s = 0;
  for (int j = m; j <= k; ++j) s += std::pow(t, j) * std::pow(R, 2 * j + l);
  return s;
}

/// Grid over (R, psi, t): R linear on [R_min, R_max], psi linear on [0, pi]
/// (angle from the positive z-axis), t logarithmic on [t_min, t_max].
struct GridSpec {
  int nR = 10, nPsi = 25, nT = 40;
  double R_min = 0.1, R_max = 2.0, t_min = 0.1, t_max = 100.0;

  std::size_t size() const { return static_cast<std::size_t>(nR) * nPsi * nT; }
  GridSpec refined() const {
    GridSpec g = *this;
    g.nR = 2 * nR - 1;
    g.nPsi = 2 * nPsi - 1;
    g.nT = 2 * nT - 1;
    return g;
  }
  double R(int i) const { return nR == 1 ? R_min : R_min + (R_max - R_min) * i / (nR - 1); }
  double psi(int i) const { return nPsi == 1 ? 0 : M_PI * i / (nPsi - 1); }
  double t(int i) const { return nT == 1 ? t_min : t_min * std::pow(t_max / t_min, static_cast<double>(i) / (nT - 1)); }
};

/// Parses "nRxnPsixnT".
inline GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char x1 = 0, x2 = 0;
  std::istringstream is(s);
  if (!(is >> g.nR >> x1 >> g.nPsi >> x2 >> g.nT) || x1 != 'x' || x2 != 'x' || is.peek() != EOF || g.nR < 1 ||
      g.nPsi < 1 || g.nT < 1)
    throw std::invalid_argument("grid must look like 10x25x40 with positive counts, got '" + s + "'");
  return g;
}

struct GridNode {
  double R, psi, t;
  Point3 p;
};

inline std::vector<GridNode> grid_nodes(const GridSpec& g) {
  std::vector<GridNode> out;
  out.reserve(g.size());
  for (int a = 0; a < g.nR; ++a)
    for (int b = 0; b < g.nPsi; ++b)
      for (int c = 0; c < g.nT; ++c) {
        const double R = g.R(a), psi = g.psi(b);
        out.push_back({R, psi, g.t(c), {R * std::sin(psi), 0.0, R * std::cos(psi)}});
      }
  return out;
}

struct EstimateRow {
  GridNode node;
  double f, g, gbar, identity_rel_err, scaled;
  bool identity_ok, inequality_ok, bounds_ok;
};

struct EstimateReport {
  int p = 1, q = 1;
  std::vector<EstimateRow> rows;
  double empirical_C = 0;   // sup of g^p gbar^q R^(p+q) t^((p+q)/2)
  double max_identity_rel_err = 0;
  std::size_t identity_failures = 0, inequality_failures = 0, bounds_failures = 0;

  bool all_ok() const {
    return identity_failures == 0 && inequality_failures == 0 && bounds_failures == 0 && std::isfinite(empirical_C);
  }
};

inline EstimateReport estimate_sampler(int p, int q, const GridSpec& grid, int jobs = 1,
                                       const Tolerances& tol = default_tolerances()) {
  if (p < 1 || q < 1) throw std::invalid_argument("estimate exponents must be >= 1");
  const auto nodes = grid_nodes(grid);
  EstimateReport rep;
  rep.p = p;
  rep.q = q;
  rep.rows.resize(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), jobs, [&](int i) {
    const GridNode& n = nodes[static_cast<std::size_t>(i)];
    EstimateRow r{};
    r.node = n;
    r.f = f_of(n.p);
    r.g = g_t(n.p, n.t);
    r.gbar = gbar_t(n.p, n.t);
    const double other = r.gbar * std::exp(n.t * r.f);
    r.identity_rel_err = std::abs(r.g - other) / std::max(std::abs(r.g), std::numeric_limits<double>::min());
    r.identity_ok = r.identity_rel_err <= tol.estimate_identity;
    r.inequality_ok = r.g * r.gbar <= std::exp(-n.t * std::abs(r.f)) * (1 + tol.estimate_inequality);
    r.bounds_ok = r.g > 0 && r.g <= 1 && r.gbar > 0 && r.gbar <= 1;
    r.scaled = std::pow(r.g, p) * std::pow(r.gbar, q) * std::pow(n.R, p + q) * std::pow(n.t, 0.5 * (p + q));
    rep.rows[static_cast<std::size_t>(i)] = r;
  });
  for (const auto& r : rep.rows) {
    rep.empirical_C = std::max(rep.empirical_C, r.scaled);
    rep.max_identity_rel_err = std::max(rep.max_identity_rel_err, r.identity_rel_err);
    rep.identity_failures += !r.identity_ok;
    rep.inequality_failures += !r.inequality_ok;
    rep.bounds_failures += !r.bounds_ok;
  }
  return rep;
}

/// D^a g_t at p by central differences, with D^a including the 1/a! factors.
inline double finite_difference_Da_g(const std::array<int, 3>& a, const Point3& p, double t, double h) {
  const auto g = [t](Point3 q) { return g_t(q, t); };
  const int k = a[0] + a[1] + a[2];
  if (k == 0) return g(p);
  auto shifted = [&](int i, double s) {
    Point3 q = p;
    q[i] += s;
    return q;
  };
  std::vector<int> dirs;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < a[i]; ++c) dirs.push_back(i);
  if (k == 1) return (g(shifted(dirs[0], h)) - g(shifted(dirs[0], -h))) / (2 * h);
  if (k == 2 && dirs[0] == dirs[1])
    return (g(shifted(dirs[0], h)) - 2 * g(p) + g(shifted(dirs[0], -h))) / (h * h) / 2;
  if (k == 2) {
    auto both = [&](double s1, double s2) {
      Point3 q = p;
      q[dirs[0]] += s1;
      q[dirs[1]] += s2;
      return g(q);
    };
    return (both(h, h) - both(h, -h) - both(-h, h) + both(-h, -h)) / (4 * h * h);
  }
  throw std::invalid_argument("derivative_bound_probe supports |a| <= 2");
}

struct DerivativeProbe {
  double sup_ratio = 0;  // sup |D^a g_t| / (sigma_{k,-k}(t,R) g_t)
  GridNode argmax{};
};

inline DerivativeProbe derivative_bound_probe(const std::array<int, 3>& a, const GridSpec& grid, int jobs = 1) {
  const int k = a[0] + a[1] + a[2];
  if (k > 2 || a[0] < 0 || a[1] < 0 || a[2] < 0) throw std::invalid_argument("derivative_bound_probe supports |a| <= 2");
  const auto nodes = grid_nodes(grid);
  std::vector<double> ratio(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), jobs, [&](int i) {
    const GridNode& n = nodes[static_cast<std::size_t>(i)];
    const double h = 1e-5 * n.R;
    const double d = finite_difference_Da_g(a, n.p, n.t, h);
    ratio[static_cast<std::size_t>(i)] = std::abs(d) / (sigma(k, -k, n.t, n.R) * g_t(n.p, n.t));
  });
  DerivativeProbe out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (ratio[i] > out.sup_ratio) {
      out.sup_ratio = ratio[i];
      out.argmax = nodes[i];
    }
  return out;
}

// ---------------------------------------------------------------- sampling

/// Seeded points, uniform in the ball of radius `radius`, kept when `accept` holds.
template <class Pred>
std::vector<Point3> sample_points(std::uint64_t seed, int count, double radius, Pred&& accept) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point3> out;
  while (static_cast<int>(out.size()) < count) {
    const Point3 p{u(rng), u(rng), u(rng)};
    if (R2(p) <= radius * radius && accept(p)) out.push_back(p);
  }
  return out;
}

}  // namespace poisson::flow
