#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace poisson {

/// Forward-mode dual number with N tangent directions. The scalar type may
/// itself be a Dual, which gives second derivatives.
template <class T, std::size_t N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
  Dual(const T& value, const std::array<T, N>& grad) : v(value), d(grad) {}

  static Dual variable(const T& value, std::size_t i) {
    Dual r(value, {});
    r.d[i] = T(1.0);
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1.0) / o.v;
    const T q = v * inv;
    for (std::size_t i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
  Dual operator-() const {
    Dual r = *this;
    r.v = -r.v;
    for (auto& x : r.d) x = -x;
    return r;
  }
};

template <class T, std::size_t N> Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) { return a += b; }
template <class T, std::size_t N> Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) { return a -= b; }
template <class T, std::size_t N> Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) { return a *= b; }
template <class T, std::size_t N> Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) { return a /= b; }
template <class T, std::size_t N> Dual<T, N> operator+(Dual<T, N> a, double b) { a.v += b; return a; }
template <class T, std::size_t N> Dual<T, N> operator+(double b, Dual<T, N> a) { a.v += b; return a; }
template <class T, std::size_t N> Dual<T, N> operator-(Dual<T, N> a, double b) { a.v -= b; return a; }
template <class T, std::size_t N> Dual<T, N> operator-(double b, const Dual<T, N>& a) { return -a + b; }
template <class T, std::size_t N> Dual<T, N> operator*(Dual<T, N> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <class T, std::size_t N> Dual<T, N> operator*(double b, Dual<T, N> a) { return a * b; }
template <class T, std::size_t N> Dual<T, N> operator/(Dual<T, N> a, double b) { return a * (1.0 / b); }
template <class T, std::size_t N> Dual<T, N> operator/(double b, const Dual<T, N>& a) { return Dual<T, N>(b) / a; }

/// Innermost double value.
inline double value_of(double x) { return x; }
template <class T, std::size_t N> double value_of(const Dual<T, N>& x) { return value_of(x.v); }

template <class T, std::size_t N> bool operator<(const Dual<T, N>& a, double b) { return value_of(a) < b; }
template <class T, std::size_t N> bool operator>(const Dual<T, N>& a, double b) { return value_of(a) > b; }
template <class T, std::size_t N> bool operator<=(const Dual<T, N>& a, double b) { return value_of(a) <= b; }
template <class T, std::size_t N> bool operator>=(const Dual<T, N>& a, double b) { return value_of(a) >= b; }

namespace detail {
template <class T, std::size_t N, class F, class DF>
Dual<T, N> chain(const Dual<T, N>& a, F&& f, DF&& df) {
  Dual<T, N> r;
  r.v = f(a.v);
  const T s = df(a.v);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}
}  // namespace detail

template <class T, std::size_t N> Dual<T, N> exp(const Dual<T, N>& a) {
  using std::exp;
  const T e = exp(a.v);
  return detail::chain(a, [&](const T&) { return e; }, [&](const T&) { return e; });
}
template <class T, std::size_t N> Dual<T, N> expm1(const Dual<T, N>& a) {
  using std::exp;
  using std::expm1;
  return detail::chain(a, [](const T& x) { return expm1(x); }, [](const T& x) { return exp(x); });
}
template <class T, std::size_t N> Dual<T, N> log(const Dual<T, N>& a) {
  using std::log;
  return detail::chain(a, [](const T& x) { return log(x); }, [](const T& x) { return T(1.0) / x; });
}
template <class T, std::size_t N> Dual<T, N> sqrt(const Dual<T, N>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return detail::chain(a, [&](const T&) { return s; }, [&](const T&) { return T(0.5) / s; });
}
template <class T, std::size_t N> Dual<T, N> sin(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, [](const T& x) { return sin(x); }, [](const T& x) { return cos(x); });
}
template <class T, std::size_t N> Dual<T, N> cos(const Dual<T, N>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, [](const T& x) { return cos(x); }, [](const T& x) { return -sin(x); });
}
template <class T, std::size_t N> Dual<T, N> abs(const Dual<T, N>& a) { return value_of(a) < 0 ? -a : a; }

template <class T, std::size_t N>
std::ostream& operator<<(std::ostream& os, const Dual<T, N>& a) {
  os << a.v << " + [";
  for (std::size_t i = 0; i < N; ++i) os << (i ? ", " : "") << a.d[i];
  return os << "]";
}

}  // namespace poisson
