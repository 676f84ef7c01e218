#pragma once

#include "poisson/calculus.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace poisson {

/// Raised for malformed Lie-algebra input; `where` names the offending field.
class LieAlgebraFormatError : public std::runtime_error {
 public:
  LieAlgebraFormatError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Structure constants [e_i, e_j] = sum_k c_ij^k e_k, stored for i < j
/// (0-based indices).
struct LieAlgebra {
  int dim = 0;
  std::vector<std::string> names;
  std::map<std::pair<int, int>, std::map<int, Rational>> brackets;

  /// c_ij^k for any ordered pair, using antisymmetry.
  Rational constant(int i, int j, int k) const {
    if (i == j) return 0;
    const bool swapped = i > j;
    auto it = brackets.find(swapped ? std::pair{j, i} : std::pair{i, j});
    if (it == brackets.end()) return 0;
    auto jt = it->second.find(k);
    if (jt == it->second.end()) return 0;
    return swapped ? Rational(-jt->second) : jt->second;
  }

  /// Adds c to c_ij^k (and the antisymmetric partner).
  void add(int i, int j, int k, const Rational& c) {
    if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim) throw std::out_of_range("structure constant index out of range");
    if (i == j) {
      if (c != 0) throw std::invalid_argument("[e_i, e_i] must vanish");
      return;
    }
    const bool swapped = i > j;
    auto& row = brackets[swapped ? std::pair{j, i} : std::pair{i, j}];
    Rational& slot = row[k];
    slot += swapped ? Rational(-c) : c;
    if (slot == 0) row.erase(k);
  }

  bool is_abelian() const {
    for (const auto& [ij, terms] : brackets)
      if (!terms.empty()) return false;
    return true;
  }

  std::string name(int i) const {
    return static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)] : "e" + std::to_string(i + 1);
  }
};

namespace algebras {

inline LieAlgebra make(int dim, std::vector<std::string> names) {
  LieAlgebra g;
  g.dim = dim;
  g.names = std::move(names);
  return g;
}

/// {y,z} = x, {z,x} = y, {x,y} = -z.
inline LieAlgebra sl2() {
  LieAlgebra g = make(3, {"x", "y", "z"});
  g.add(1, 2, 0, 1);
  g.add(2, 0, 1, 1);
  g.add(0, 1, 2, -1);
  return g;
}

inline LieAlgebra so3() {
  LieAlgebra g = make(3, {"x", "y", "z"});
  g.add(1, 2, 0, 1);
  g.add(2, 0, 1, 1);
  g.add(0, 1, 2, 1);
  return g;
}

/// [e1, e2] = e3.
inline LieAlgebra heisenberg() {
  LieAlgebra g = make(3, {"x", "y", "z"});
  g.add(0, 1, 2, 1);
  return g;
}

inline LieAlgebra abelian(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(i < 3 ? std::string(1, "xyz"[i]) : "v" + std::to_string(i));
  return make(n, std::move(names));
}

}  // namespace algebras

namespace detail {

inline int json_index(const nlohmann::json& node, const std::string& where, int dim) {
  if (!node.is_number_integer()) throw LieAlgebraFormatError(where, "expected an integer index");
  const auto v = node.get<long long>();
  if (v < 1 || v > dim) throw LieAlgebraFormatError(where, "index " + std::to_string(v) + " outside 1.." + std::to_string(dim));
  return static_cast<int>(v - 1);
}

inline Rational json_rational(const nlohmann::json& node, const std::string& where) {
  if (node.is_number_integer()) return Rational(node.get<long>());
  if (!node.is_string()) throw LieAlgebraFormatError(where, "expected a rational string such as \"-1\" or \"3/2\"");
  try {
    return parse_rational(node.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw LieAlgebraFormatError(where, e.what());
  }
}

}  // namespace detail

/// Parses {"dim": n, "names": [...], "brackets": [{"i":1,"j":2,"terms":[{"k":3,"c":"-1"}]}]}
/// with 1-based indices.
inline LieAlgebra parse_lie_algebra(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // locate the byte offset as line:column
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw LieAlgebraFormatError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
  }
  if (!doc.is_object()) throw LieAlgebraFormatError("<root>", "expected a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw LieAlgebraFormatError("dim", "missing or non-integer");
  const long long dim = doc["dim"].get<long long>();
  if (dim < 1 || dim > kMaxVariables) throw LieAlgebraFormatError("dim", "must lie in 1.." + std::to_string(kMaxVariables));
  LieAlgebra g;
  g.dim = static_cast<int>(dim);
  if (doc.contains("names")) {
    const auto& names = doc["names"];
    if (!names.is_array() || names.size() != static_cast<std::size_t>(dim)) throw LieAlgebraFormatError("names", "expected an array of dim strings");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!names[i].is_string()) throw LieAlgebraFormatError("names[" + std::to_string(i) + "]", "expected a string");
      g.names.push_back(names[i].get<std::string>());
    }
  }
  if (!doc.contains("brackets")) throw LieAlgebraFormatError("brackets", "missing");
  const auto& brackets = doc["brackets"];
  if (!brackets.is_array()) throw LieAlgebraFormatError("brackets", "expected an array");
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string at = "brackets[" + std::to_string(b) + "]";
    const auto& entry = brackets[b];
    if (!entry.is_object()) throw LieAlgebraFormatError(at, "expected an object");
    for (const char* key : {"i", "j", "terms"})
      if (!entry.contains(key)) throw LieAlgebraFormatError(at + "." + key, "missing");
    const int i = detail::json_index(entry["i"], at + ".i", g.dim);
    const int j = detail::json_index(entry["j"], at + ".j", g.dim);
    const auto& terms = entry["terms"];
    if (!terms.is_array()) throw LieAlgebraFormatError(at + ".terms", "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tat = at + ".terms[" + std::to_string(t) + "]";
      if (!terms[t].is_object() || !terms[t].contains("k") || !terms[t].contains("c")) {
        throw LieAlgebraFormatError(tat, "expected {\"k\": index, \"c\": rational}");
      }
      const int k = detail::json_index(terms[t]["k"], tat + ".k", g.dim);
      const Rational c = detail::json_rational(terms[t]["c"], tat + ".c");
      if (i == j && c != 0) throw LieAlgebraFormatError(at, "bracket of a basis element with itself must vanish");
      g.add(i, j, k, c);
    }
  }
  return g;
}

inline LieAlgebra load_lie_algebra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LieAlgebraFormatError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lie_algebra(buf.str());
}

inline nlohmann::json to_json(const LieAlgebra& g) {
  nlohmann::json doc;
  doc["dim"] = g.dim;
  if (!g.names.empty()) doc["names"] = g.names;
  doc["brackets"] = nlohmann::json::array();
  for (const auto& [ij, terms] : g.brackets) {
    if (terms.empty()) continue;
    nlohmann::json entry{{"i", ij.first + 1}, {"j", ij.second + 1}, {"terms", nlohmann::json::array()}};
    for (const auto& [k, c] : terms) entry["terms"].push_back({{"k", k + 1}, {"c", c.get_str()}});
    doc["brackets"].push_back(entry);
  }
  return doc;
}

/// pi = sum_{i<j} (sum_k c_ij^k x_k) d_i ^ d_j.
inline Multivector<Polynomial> build_linear_poisson(const LieAlgebra& g) {
  Multivector<Polynomial> pi(g.dim, 2, g.dim);
  for (const auto& [ij, terms] : g.brackets) {
    Polynomial c(g.dim);
    for (const auto& [k, v] : terms) c.add_term(Monomial::unit(k), v);
    pi += Multivector<Polynomial>::basis(g.dim, {ij.first, ij.second}, c);
  }
  return pi;
}

/// [pi, pi]; zero iff the constants satisfy the Jacobi identity.
inline Multivector<Polynomial> jacobi_check(const LieAlgebra& g) {
  const auto pi = build_linear_poisson(g);
  return schouten_bracket(pi, pi);
}

/// "coeff * d_a^d_b^d_c" for the first (lex-ordered) nonzero component.
template <class S, Variance V>
std::string first_component(const GradedTensor<S, V>& t, const std::vector<std::string>& names = {}) {
  if (t.is_zero()) return "0";
  const auto comps = t.ordered_components();
  GradedTensor<S, V> single(t.dim(), t.degree(), t.nvars());
  single.add(comps.front().first, comps.front().second);
  return single.to_string(names);
}

}  // namespace poisson
