#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace poisson {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
  if (s.find('/') != std::string::npos && q.get_den() == 0) {
    throw std::invalid_argument("zero denominator in '" + s + "'");
  }
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace poisson
