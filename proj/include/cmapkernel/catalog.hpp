#pragma once

/*
 * Deterministic builders for the standard small-group families, a recipe
 * string grammar for the CLI, text ingestion for group tables and
 * homomorphism problems, and the canonical re-serialization used for
 * digests and reproducer files.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cmapkernel/abelian.hpp"
#include "cmapkernel/cayley.hpp"
#include "cmapkernel/errors.hpp"

namespace cmapkernel {

inline constexpr int kRecipeOrderLimit = 512;

// ---------------------------------------------------------------------------
// recipes

struct GroupRecipe {
  std::string kind;                  // builder name, or "direct_product"
  std::vector<int64_t> params;       // numeric parameters for leaf kinds
  std::vector<GroupRecipe> children; // exactly two for direct_product
};

namespace detail {

inline CayleyGroup build_from_fn(int n, const std::function<int(int, int)>& f) {
  std::vector<std::vector<int>> rows(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[size_t(i)][size_t(j)] = f(i, j);
  return validate_group(rows);
}

inline int64_t checked_order(const std::string& kind, int64_t n) {
  if (n < 1 || n > kRecipeOrderLimit)
    throw InvalidRecipe(kind + ": resulting order " + std::to_string(n) + " is outside 1.." +
                        std::to_string(kRecipeOrderLimit));
  return n;
}

inline int64_t small_pow(int64_t base, int64_t exp, int64_t mod) {
  int64_t r = 1 % mod;
  for (int64_t i = 0; i < exp; ++i) r = r * base % mod;
  return r;
}

inline bool is_power_of_two(int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline void require_prime(const std::string& kind, int64_t p) {
  if (!is_prime(p)) throw InvalidRecipe(kind + ": " + std::to_string(p) + " is not prime");
}

}  // namespace detail

inline CayleyGroup build_cyclic(int64_t p, int64_t e) {
  detail::require_prime("cyclic", p);
  if (e < 1) throw InvalidRecipe("cyclic: exponent must be at least 1");
  int64_t n = 1;
  for (int64_t i = 0; i < e; ++i) n = detail::checked_order("cyclic", n * p);
  return detail::build_from_fn(int(n), [n](int i, int j) { return int((i + j) % n); });
}

inline CayleyGroup build_abelian(int64_t p, const std::vector<int64_t>& exps) {
  detail::require_prime("abelian", p);
  if (exps.empty()) throw InvalidRecipe("abelian: at least one exponent required");
  int64_t n = 1;
  std::vector<int64_t> moduli;
  for (int64_t e : exps) {
    if (e < 1) throw InvalidRecipe("abelian: exponents must be at least 1");
    int64_t m = 1;
    for (int64_t i = 0; i < e; ++i) m = detail::checked_order("abelian", m * p);
    moduli.push_back(m);
    n = detail::checked_order("abelian", n * m);
  }
  // mixed-radix componentwise addition, last coordinate fastest
  return detail::build_from_fn(int(n), [moduli](int i, int j) {
    int64_t out = 0;
    int64_t ri = i, rj = j;
    std::vector<int64_t> digits(moduli.size());
    for (size_t k = moduli.size(); k-- > 0;) {
      int64_t m = moduli[k];
      digits[k] = (ri % m + rj % m) % m;
      ri /= m;
      rj /= m;
    }
    for (size_t k = 0; k < moduli.size(); ++k) out = out * moduli[k] + digits[k];
    return int(out);
  });
}

/// Dihedral group of total order N = 2^n >= 8; elements r^i s^j with
/// s r s = r^{-1}, indexed as 2i + j.
inline CayleyGroup build_dihedral(int64_t N) {
  if (!detail::is_power_of_two(N) || N < 8)
    throw InvalidRecipe("dihedral: order must be a power of two, at least 8");
  detail::checked_order("dihedral", N);
  const int64_t half = N / 2;
  return detail::build_from_fn(int(N), [half](int x, int y) {
    int64_t i = x / 2, j = x % 2, k = y / 2, l = y % 2;
    int64_t ii = ((j ? i - k : i + k) % half + half) % half;
    return int(2 * ii + (j + l) % 2);
  });
}

/// Generalized quaternion group of order N = 2^n >= 8; x^{N/2}=1,
/// y^2 = x^{N/4}, y x y^{-1} = x^{-1}; elements x^i y^j indexed as 2i + j.
inline CayleyGroup build_quaternion(int64_t N) {
  if (!detail::is_power_of_two(N) || N < 8)
    throw InvalidRecipe("quaternion: order must be a power of two, at least 8");
  detail::checked_order("quaternion", N);
  const int64_t half = N / 2, quarter = N / 4;
  return detail::build_from_fn(int(N), [half, quarter](int x, int y) {
    int64_t i = x / 2, j = x % 2, k = y / 2, l = y % 2;
    int64_t ii = (j ? i - k : i + k) + ((j && l) ? quarter : 0);
    ii = (ii % half + half) % half;
    return int(2 * ii + (j + l) % 2);
  });
}

/// Semidihedral group of order N = 2^n >= 16; s r s = r^{N/4 - 1}.
inline CayleyGroup build_semidihedral(int64_t N) {
  if (!detail::is_power_of_two(N) || N < 16)
    throw InvalidRecipe("semidihedral: order must be a power of two, at least 16");
  detail::checked_order("semidihedral", N);
  const int64_t half = N / 2, t = N / 4 - 1;
  return detail::build_from_fn(int(N), [half, t](int x, int y) {
    int64_t i = x / 2, j = x % 2, k = y / 2, l = y % 2;
    int64_t ii = (i + (j ? t * k : k)) % half;
    return int(2 * ii + (j + l) % 2);
  });
}

/// Modular group of order p^n, n >= 3: a^{p^{n-1}} = b^p = 1,
/// b a b^{-1} = a^{1+p^{n-2}}. For p = 2, n = 3 the twist collapses to the
/// dihedral relation, so that parameter pair is rejected.
inline CayleyGroup build_modular(int64_t p, int64_t n) {
  detail::require_prime("modular", p);
  if (n < 3) throw InvalidRecipe("modular: exponent must be at least 3");
  if (p == 2 && n == 3)
    throw InvalidRecipe("modular: (2,3) degenerates to the dihedral group; use dihedral:8");
  int64_t order = 1;
  for (int64_t i = 0; i < n; ++i) order = detail::checked_order("modular", order * p);
  const int64_t half = order / p;       // p^{n-1}
  const int64_t t = 1 + half / p;       // 1 + p^{n-2}
  std::vector<int64_t> tpow(static_cast<size_t>(p)); // t^j mod p^{n-1}
  for (int64_t j = 0; j < p; ++j) tpow[size_t(j)] = detail::small_pow(t, j, half);
  return detail::build_from_fn(int(order), [p, half, tpow](int x, int y) {
    int64_t i = x / p, j = x % p, k = y / p, l = y % p;
    int64_t ii = (i + k * tpow[size_t(j)]) % half;
    return int(ii * p + (j + l) % p);
  });
}

/// Heisenberg group over Z_p (upper unitriangular 3x3 matrices), order p^3;
/// elements (a,b,c) indexed as a p^2 + b p + c.
inline CayleyGroup build_heisenberg(int64_t p) {
  detail::require_prime("heisenberg", p);
  int64_t order = detail::checked_order("heisenberg", p * p * p);
  return detail::build_from_fn(int(order), [p](int x, int y) {
    int64_t a = x / (p * p), b = x / p % p, c = x % p;
    int64_t d = y / (p * p), e = y / p % p, f = y % p;
    return int(((a + d) % p) * p * p + ((b + e) % p) * p + (c + f + a * e) % p);
  });
}

/// Extraspecial group of order p^3 and exponent p^2 (odd p): the modular
/// group of order p^3. For p = 2 both order-8 extraspecial groups are
/// already covered by dihedral:8 and quaternion:8.
inline CayleyGroup build_extraspecial_exp_p2(int64_t p) {
  detail::require_prime("extraspecial_exp_p2", p);
  if (p == 2)
    throw InvalidRecipe(
        "extraspecial_exp_p2: for p=2 use dihedral:8 or quaternion:8 instead");
  return build_modular(p, 3);
}

/// Z_{p^a} x| Z_{p^b} with y x y^{-1} = x^t; requires p not dividing t and
/// t^{p^b} = 1 mod p^a so the action is a well-defined automorphism.
inline CayleyGroup build_semidirect(int64_t p, int64_t a, int64_t b, int64_t t) {
  detail::require_prime("semidirect", p);
  if (a < 1 || b < 1) throw InvalidRecipe("semidirect: both exponents must be at least 1");
  int64_t pa = 1, pb = 1;
  for (int64_t i = 0; i < a; ++i) pa = detail::checked_order("semidirect", pa * p);
  for (int64_t i = 0; i < b; ++i) pb = detail::checked_order("semidirect", pb * p);
  detail::checked_order("semidirect", pa * pb);
  t = (t % pa + pa) % pa;
  if (t % p == 0) throw InvalidRecipe("semidirect: twist must be a unit modulo p^a");
  if (detail::small_pow(t, pb, pa) != 1 % pa)
    throw InvalidRecipe("semidirect: twist^(p^b) must be 1 mod p^a for a well-defined action");
  std::vector<int64_t> tpow(static_cast<size_t>(pb));
  for (int64_t j = 0; j < pb; ++j) tpow[size_t(j)] = detail::small_pow(t, j, pa);
  return detail::build_from_fn(int(pa * pb), [pa, pb, tpow](int x, int y) {
    int64_t i = x / pb, j = x % pb, k = y / pb, l = y % pb;
    int64_t ii = (i + k * tpow[size_t(j)]) % pa;
    return int(ii * pb + (j + l) % pb);
  });
}

/// Direct product on index pairs: (g1, g2) indexed as g1 |G2| + g2.
inline CayleyGroup build_direct_product(const CayleyGroup& G1, const CayleyGroup& G2) {
  int64_t n = detail::checked_order("direct_product", int64_t(G1.order) * int64_t(G2.order));
  const int n2 = G2.order;
  std::vector<std::vector<int>> rows(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int x = 0; x < int(n); ++x)
    for (int y = 0; y < int(n); ++y)
      rows[size_t(x)][size_t(y)] =
          G1.mul(x / n2, y / n2) * n2 + G2.mul(x % n2, y % n2);
  return validate_group(rows);
}

// ---------------------------------------------------------------------------
// recipe grammar: `name:p1:p2:...`, `dp(recipe,recipe)`, nested

namespace detail {

inline std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

inline GroupRecipe parse_recipe_stripped(const std::string& s) {
  if (s.empty()) throw InvalidRecipe("empty recipe");
  for (const char* head : {"dp(", "direct_product("}) {
    std::string prefix(head);
    if (s.rfind(prefix, 0) == 0) {
      if (s.back() != ')') throw InvalidRecipe("unbalanced parentheses in: " + s);
      std::string inner = s.substr(prefix.size(), s.size() - prefix.size() - 1);
      int depth = 0;
      size_t comma = std::string::npos;
      for (size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] == '(') ++depth;
        else if (inner[i] == ')') --depth;
        else if (inner[i] == ',' && depth == 0) {
          comma = i;
          break;
        }
      }
      if (comma == std::string::npos)
        throw InvalidRecipe("direct product needs two comma-separated recipes: " + s);
      GroupRecipe r;
      r.kind = "direct_product";
      r.children.push_back(parse_recipe_stripped(inner.substr(0, comma)));
      r.children.push_back(parse_recipe_stripped(inner.substr(comma + 1)));
      return r;
    }
  }
  GroupRecipe r;
  std::stringstream ss(s);
  std::string piece;
  if (!std::getline(ss, piece, ':')) throw InvalidRecipe("empty recipe");
  r.kind = piece;
  while (std::getline(ss, piece, ':')) {
    if (piece.empty()) throw InvalidRecipe("empty parameter in: " + s);
    try {
      size_t used = 0;
      int64_t v = std::stoll(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      r.params.push_back(v);
    } catch (const std::exception&) {
      throw InvalidRecipe("parameter '" + piece + "' is not an integer in: " + s);
    }
  }
  return r;
}

}  // namespace detail

inline GroupRecipe parse_recipe(const std::string& text) {
  return detail::parse_recipe_stripped(detail::strip_spaces(text));
}

inline void require_params(const GroupRecipe& r, size_t count) {
  if (r.params.size() != count)
    throw InvalidRecipe(r.kind + ": expected " + std::to_string(count) + " parameters, got " +
                        std::to_string(r.params.size()));
}

inline CayleyGroup build(const GroupRecipe& r) {
  if (r.kind == "direct_product") {
    if (r.children.size() != 2)
      throw InvalidRecipe("direct_product: expected exactly two sub-recipes");
    return build_direct_product(build(r.children[0]), build(r.children[1]));
  }
  if (!r.children.empty()) throw InvalidRecipe(r.kind + ": sub-recipes are not accepted");
  if (r.kind == "cyclic") {
    require_params(r, 2);
    return build_cyclic(r.params[0], r.params[1]);
  }
  if (r.kind == "abelian") {
    if (r.params.size() < 2)
      throw InvalidRecipe("abelian: expected a prime and at least one exponent");
    return build_abelian(r.params[0],
                         std::vector<int64_t>(r.params.begin() + 1, r.params.end()));
  }
  if (r.kind == "dihedral") {
    require_params(r, 1);
    return build_dihedral(r.params[0]);
  }
  if (r.kind == "quaternion") {
    require_params(r, 1);
    return build_quaternion(r.params[0]);
  }
  if (r.kind == "semidihedral") {
    require_params(r, 1);
    return build_semidihedral(r.params[0]);
  }
  if (r.kind == "modular") {
    require_params(r, 2);
    return build_modular(r.params[0], r.params[1]);
  }
  if (r.kind == "heisenberg") {
    require_params(r, 1);
    return build_heisenberg(r.params[0]);
  }
  if (r.kind == "extraspecial_exp_p2") {
    require_params(r, 1);
    return build_extraspecial_exp_p2(r.params[0]);
  }
  if (r.kind == "semidirect") {
    require_params(r, 4);
    return build_semidirect(r.params[0], r.params[1], r.params[2], r.params[3]);
  }
  throw InvalidRecipe("unknown recipe kind: " + r.kind);
}

inline CayleyGroup build(const std::string& recipe_text) {
  return build(parse_recipe(recipe_text));
}

inline std::string recipe_to_string(const GroupRecipe& r) {
  if (r.kind == "direct_product")
    return "dp(" + recipe_to_string(r.children[0]) + "," + recipe_to_string(r.children[1]) + ")";
  std::string out = r.kind;
  for (int64_t v : r.params) out += ":" + std::to_string(v);
  return out;
}

// ---------------------------------------------------------------------------
// text ingestion

namespace detail {

/// Lines with '#' comments stripped and blanks dropped, with 1-based line
/// numbers retained for error reporting.
inline std::vector<std::pair<int, std::string>> significant_lines(std::istream& in) {
  std::vector<std::pair<int, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    if (!blank) out.emplace_back(lineno, line);
  }
  return out;
}

inline std::vector<int64_t> parse_ints(int lineno, const std::string& text) {
  std::vector<int64_t> vals;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    try {
      size_t used = 0;
      vals.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected an integer, found '" + tok + "'");
    }
  }
  return vals;
}

}  // namespace detail

/// Multiplication-table format: a line `order N`, then N rows of N 1-based
/// element indices; element 1 is the identity. '#' starts a comment.
inline CayleyGroup ingest_group(std::istream& in, int order_guard = kDefaultOrderGuard) {
  auto lines = detail::significant_lines(in);
  if (lines.empty()) throw ParseError(0, "empty input; expected an 'order N' line");
  size_t at = 0;
  {
    std::istringstream head(lines[at].second);
    std::string kw;
    head >> kw;
    if (kw != "order")
      throw ParseError(lines[at].first, "expected 'order N', found '" + kw + "'");
    std::string rest;
    std::getline(head, rest);
    std::vector<int64_t> vals = detail::parse_ints(lines[at].first, rest);
    if (vals.size() != 1 || vals[0] < 1)
      throw ParseError(lines[at].first, "expected a single positive order");
    if (vals[0] > order_guard)
      throw GuardExceeded("group order in table file", uint64_t(vals[0]), uint64_t(order_guard));
    ++at;
    int n = int(vals[0]);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < n; ++i, ++at) {
      if (at >= lines.size())
        throw ParseError(lines.back().first, "table ends after " + std::to_string(i) +
                                                 " of " + std::to_string(n) + " rows");
      std::vector<int64_t> vals_row = detail::parse_ints(lines[at].first, lines[at].second);
      if (int(vals_row.size()) != n)
        throw ParseError(lines[at].first, "expected " + std::to_string(n) + " entries, found " +
                                              std::to_string(vals_row.size()));
      std::vector<int> row;
      for (int64_t v : vals_row) {
        if (v < 1 || v > n)
          throw ParseError(lines[at].first,
                           "entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
        row.push_back(int(v - 1));
      }
      rows.push_back(std::move(row));
    }
    if (at != lines.size())
      throw ParseError(lines[at].first, "unexpected content after the table");
    return validate_group(rows, order_guard);
  }
}

struct LambdaProblem {
  AbelianShape A;
  AbelianShape B;
  Homomorphism lam;
};

/// Homomorphism-problem format, one statement per line in this order:
///   p <prime> / A <exponents> / B <exponents> / lambda / then the matrix,
/// one row per line (rows indexed by target factors, columns by source
/// generators). '#' starts a comment.
inline LambdaProblem ingest_lambda_problem(std::istream& in) {
  auto lines = detail::significant_lines(in);
  size_t at = 0;
  auto take_keyword_ints = [&](const std::string& kw) {
    if (at >= lines.size())
      throw ParseError(lines.empty() ? 0 : lines.back().first, "missing '" + kw + "' line");
    std::istringstream ss(lines[at].second);
    std::string head;
    ss >> head;
    if (head != kw)
      throw ParseError(lines[at].first, "expected '" + kw + "', found '" + head + "'");
    std::string rest;
    std::getline(ss, rest);
    std::vector<int64_t> vals = detail::parse_ints(lines[at].first, rest);
    ++at;
    return vals;
  };
  std::vector<int64_t> pv = take_keyword_ints("p");
  if (pv.size() != 1) throw ParseError(lines[at - 1].first, "expected a single prime after 'p'");
  std::vector<int64_t> av = take_keyword_ints("A");
  if (av.empty()) throw ParseError(lines[at - 1].first, "expected exponents after 'A'");
  std::vector<int64_t> bv = take_keyword_ints("B");
  if (bv.empty()) throw ParseError(lines[at - 1].first, "expected exponents after 'B'");
  std::vector<int64_t> lv = take_keyword_ints("lambda");
  if (!lv.empty()) throw ParseError(lines[at - 1].first, "'lambda' takes no values on its line");

  std::vector<int> ae, be;
  for (int64_t v : av) ae.push_back(int(v));
  for (int64_t v : bv) be.push_back(int(v));
  // exponents must arrive in invariant-factor order so the matrix columns
  // and rows are unambiguous
  if (!std::is_sorted(ae.rbegin(), ae.rend()))
    throw ParseError(0, "'A' exponents must be non-increasing");
  if (!std::is_sorted(be.rbegin(), be.rend()))
    throw ParseError(0, "'B' exponents must be non-increasing");
  AbelianShape A(pv[0], ae);
  AbelianShape B(pv[0], be);
  size_t m = size_t(B.factors()), n = size_t(A.factors());
  std::vector<std::vector<int64_t>> mat;
  for (size_t i = 0; i < m; ++i, ++at) {
    if (at >= lines.size())
      throw ParseError(lines.back().first, "matrix ends after " + std::to_string(i) + " of " +
                                               std::to_string(m) + " rows");
    std::vector<int64_t> row = detail::parse_ints(lines[at].first, lines[at].second);
    if (row.size() != n)
      throw ParseError(lines[at].first, "expected " + std::to_string(n) + " entries, found " +
                                            std::to_string(row.size()));
    mat.push_back(std::move(row));
  }
  if (at != lines.size())
    throw ParseError(lines[at].first, "unexpected content after the matrix");
  return LambdaProblem{A, B, hom_validate(mat, A, B)};
}

inline CayleyGroup ingest_group_file(const std::string& path,
                                     int order_guard = kDefaultOrderGuard) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open file: " + path);
  return ingest_group(in, order_guard);
}

inline LambdaProblem ingest_lambda_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open file: " + path);
  return ingest_lambda_problem(in);
}

// ---------------------------------------------------------------------------
// canonical serialization (digest + reproducer files)

inline std::string canonical_group_text(const CayleyGroup& G) {
  std::string out = "order " + std::to_string(G.order) + "\n";
  for (int i = 0; i < G.order; ++i) {
    for (int j = 0; j < G.order; ++j) {
      if (j) out += ' ';
      out += std::to_string(G.mul(i, j) + 1);
    }
    out += '\n';
  }
  return out;
}

inline std::string canonical_lambda_text(const AbelianShape& A, const AbelianShape& B,
                                         const Homomorphism& lam) {
  std::string out = "p " + std::to_string(A.p) + "\nA";
  for (int e : A.alphas) out += ' ' + std::to_string(e);
  out += "\nB";
  for (int e : B.alphas) out += ' ' + std::to_string(e);
  out += "\nlambda\n";
  for (int i = 0; i < lam.rows(); ++i) {
    for (int j = 0; j < lam.cols(); ++j) {
      if (j) out += ' ';
      out += std::to_string(lam.at(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace cmapkernel
