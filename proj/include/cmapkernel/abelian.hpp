#pragma once

/*
 * Exact arithmetic for finite abelian p-groups in invariant-factor form:
 * shapes, coefficient-vector elements, homomorphisms as constrained integer
 * matrices, the canonical one-entry basis of Hom, and materialized subgroups.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmapkernel/errors.hpp"

namespace cmapkernel {

using std::int64_t;
using std::uint64_t;

// ---------------------------------------------------------------------------
// small exact-integer helpers

inline bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// p^e, rejecting anything past 2^62.
inline int64_t ipow(int64_t p, int e) {
  int64_t r = 1;
  const int64_t cap = int64_t{1} << 62;
  for (int i = 0; i < e; ++i) {
    if (r > cap / p) throw GuardExceeded("power overflows exact range", 0, uint64_t(cap));
    r *= p;
  }
  return r;
}

/// v_p(x) for x != 0, capped at `cap` (also returned for x == 0).
inline int valuation(int64_t p, int64_t x, int cap) {
  if (x < 0) x = -x;
  int v = 0;
  while (v < cap && x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return (x == 0) ? cap : v;
}

inline int64_t mulmod(int64_t a, int64_t b, int64_t m) {
  return int64_t((unsigned __int128)(a) * (unsigned __int128)(b) % (unsigned __int128)(m));
}

// ---------------------------------------------------------------------------
// AbelianShape

/// A finite abelian p-group p^a1 x ... x p^an with a1 >= ... >= an >= 1.
/// Constructor sorts the exponents and remembers where each input slot went.
struct AbelianShape {
  int64_t p = 0;
  std::vector<int> alphas;        // sorted non-increasing
  std::vector<int> input_order;   // input_order[i] = input index now at slot i
  std::vector<int64_t> moduli;    // p^alphas[i]
  std::vector<uint64_t> strides;  // mixed-radix strides, last coordinate fastest
  uint64_t order = 1;

  AbelianShape() = default;

  AbelianShape(int64_t prime, std::vector<int> exponents) : p(prime) {
    if (!is_prime(p)) throw ShapeMismatch("p = " + std::to_string(p) + " is not prime");
    if (exponents.empty()) throw ShapeMismatch("shape needs at least one cyclic factor");
    std::vector<int> idx(exponents.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return exponents[a] > exponents[b]; });
    alphas.reserve(exponents.size());
    for (int i : idx) {
      if (exponents[i] < 1) throw ShapeMismatch("cyclic factor exponent must be >= 1");
      alphas.push_back(exponents[i]);
      input_order.push_back(i);
    }
    moduli.reserve(alphas.size());
    for (int a : alphas) moduli.push_back(ipow(p, a));  // ipow rejects > 2^62
    order = 1;
    for (int64_t m : moduli) {
      if (order > (uint64_t{1} << 62) / uint64_t(m))
        throw ShapeMismatch("group order exceeds exact integer range");
      order *= uint64_t(m);
    }
    strides.assign(alphas.size(), 1);
    for (int i = int(alphas.size()) - 2; i >= 0; --i)
      strides[size_t(i)] = strides[size_t(i) + 1] * uint64_t(moduli[size_t(i) + 1]);
  }

  int factors() const { return int(alphas.size()); }

  bool operator==(const AbelianShape& o) const { return p == o.p && alphas == o.alphas; }
  bool operator!=(const AbelianShape& o) const { return !(*this == o); }
};

/// Coefficient vector over a shape; coordinate i lives in [0, p^alphas[i]).
using Element = std::vector<int64_t>;

inline Element zero_element(const AbelianShape& s) { return Element(size_t(s.factors()), 0); }

/// The unit coordinate vector a_i (0-based i).
inline Element unit_element(const AbelianShape& s, int i) {
  Element e = zero_element(s);
  e.at(size_t(i)) = 1;
  return e;
}

inline Element reduce(const AbelianShape& s, Element x) {
  if (int(x.size()) != s.factors()) throw ShapeMismatch("coefficient count does not match shape");
  for (int i = 0; i < s.factors(); ++i) {
    int64_t m = s.moduli[size_t(i)];
    int64_t v = x[size_t(i)] % m;
    x[size_t(i)] = v < 0 ? v + m : v;
  }
  return x;
}

inline Element add(const AbelianShape& s, const Element& x, const Element& y) {
  if (x.size() != y.size() || int(x.size()) != s.factors())
    throw ShapeMismatch("element addition across different shapes");
  Element r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = (x[i] + y[i]) % s.moduli[i];
  return r;
}

inline Element negate(const AbelianShape& s, const Element& x) {
  Element r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] == 0 ? 0 : s.moduli[i] - x[i];
  return r;
}

inline Element scalar_mul(const AbelianShape& s, int64_t k, const Element& x) {
  Element r(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    int64_t m = s.moduli[i];
    int64_t kk = k % m;
    if (kk < 0) kk += m;
    r[i] = mulmod(kk, x[i], m);
  }
  return r;
}

inline bool is_zero(const Element& x) {
  for (int64_t v : x)
    if (v != 0) return false;
  return true;
}

/// Exponent t of the least p^t annihilating x.
inline int order_exponent(const AbelianShape& s, const Element& x) {
  int t = 0;
  for (int i = 0; i < s.factors(); ++i) {
    int a = s.alphas[size_t(i)];
    int v = valuation(s.p, x[size_t(i)], a);
    t = std::max(t, a - v);
  }
  return t;
}

/// Least p^t with p^t * x = 0, as an integer.
inline int64_t order_of(const AbelianShape& s, const Element& x) {
  if (int(x.size()) != s.factors()) throw ShapeMismatch("element does not match shape");
  return ipow(s.p, order_exponent(s, x));
}

inline uint64_t rank_of(const AbelianShape& s, const Element& x) {
  uint64_t r = 0;
  for (int i = 0; i < s.factors(); ++i) r += uint64_t(x[size_t(i)]) * s.strides[size_t(i)];
  return r;
}

inline Element unrank(const AbelianShape& s, uint64_t r) {
  Element x(size_t(s.factors()));
  for (int i = 0; i < s.factors(); ++i) {
    x[size_t(i)] = int64_t(r / s.strides[size_t(i)]) % s.moduli[size_t(i)];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Homomorphism

/// A homomorphism between shapes, stored as its (target factors) x (source
/// factors) coefficient matrix: column j holds the coordinates of the image of
/// source generator j. Entry (i,j) is reduced mod p^{beta_i} and must be
/// divisible by p^{max(0, beta_i - alpha_j)}.
struct Homomorphism {
  AbelianShape source;  // exponents alpha, n factors
  AbelianShape target;  // exponents beta, m factors
  std::vector<int64_t> mat;  // m*n, row-major

  int rows() const { return target.factors(); }
  int cols() const { return source.factors(); }
  int64_t& at(int i, int j) { return mat[size_t(i) * size_t(cols()) + size_t(j)]; }
  int64_t at(int i, int j) const { return mat[size_t(i) * size_t(cols()) + size_t(j)]; }

  bool operator==(const Homomorphism& o) const {
    return source == o.source && target == o.target && mat == o.mat;
  }
};

/// Reduce and admit a candidate matrix as a homomorphism A -> B, or throw
/// DivisibilityViolation at the first offending entry (row-major scan).
inline Homomorphism hom_validate(const std::vector<std::vector<int64_t>>& m,
                                 const AbelianShape& A, const AbelianShape& B) {
  const int n = A.factors(), mm = B.factors();
  if (int(m.size()) != mm) throw ShapeMismatch("matrix row count does not match target");
  Homomorphism h;
  h.source = A;
  h.target = B;
  h.mat.assign(size_t(mm) * size_t(n), 0);
  for (int i = 0; i < mm; ++i) {
    if (int(m[size_t(i)].size()) != n) throw ShapeMismatch("matrix column count does not match source");
    for (int j = 0; j < n; ++j) {
      int64_t mod = B.moduli[size_t(i)];
      int64_t v = m[size_t(i)][size_t(j)] % mod;
      if (v < 0) v += mod;
      int need = std::max(0, B.alphas[size_t(i)] - A.alphas[size_t(j)]);
      int64_t req = ipow(B.p, need);
      if (v % req != 0) throw DivisibilityViolation(i, j, v, req);
      h.at(i, j) = v;
    }
  }
  return h;
}

inline Homomorphism hom_zero(const AbelianShape& A, const AbelianShape& B) {
  Homomorphism h;
  h.source = A;
  h.target = B;
  h.mat.assign(size_t(B.factors()) * size_t(A.factors()), 0);
  return h;
}

inline Homomorphism hom_identity(const AbelianShape& A) {
  Homomorphism h = hom_zero(A, A);
  for (int i = 0; i < A.factors(); ++i) h.at(i, i) = 1;
  return h;
}

inline bool is_zero_hom(const Homomorphism& h) {
  for (int64_t v : h.mat)
    if (v != 0) return false;
  return true;
}

inline Element hom_apply(const Homomorphism& h, const Element& x) {
  if (int(x.size()) != h.cols()) throw ShapeMismatch("element does not match hom source");
  Element y(size_t(h.rows()), 0);
  for (int i = 0; i < h.rows(); ++i) {
    int64_t m = h.target.moduli[size_t(i)];
    int64_t acc = 0;
    for (int j = 0; j < h.cols(); ++j) acc = (acc + mulmod(h.at(i, j), x[size_t(j)] % m, m)) % m;
    y[size_t(i)] = acc;
  }
  return y;
}

/// g after f. Requires f.target == g.source.
inline Homomorphism hom_compose(const Homomorphism& g, const Homomorphism& f) {
  if (f.target != g.source) throw ShapeMismatch("composition shapes do not line up");
  Homomorphism h;
  h.source = f.source;
  h.target = g.target;
  h.mat.assign(size_t(g.rows()) * size_t(f.cols()), 0);
  for (int i = 0; i < g.rows(); ++i) {
    int64_t m = g.target.moduli[size_t(i)];
    for (int j = 0; j < f.cols(); ++j) {
      int64_t acc = 0;
      for (int k = 0; k < g.cols(); ++k)
        acc = (acc + mulmod(g.at(i, k) % m, f.at(k, j) % m, m)) % m;
      h.mat[size_t(i) * size_t(f.cols()) + size_t(j)] = acc;
    }
  }
  return h;
}

inline Homomorphism hom_add(const Homomorphism& f, const Homomorphism& g) {
  if (f.source != g.source || f.target != g.target)
    throw ShapeMismatch("hom addition across different spaces");
  Homomorphism h = f;
  for (size_t i = 0; i < h.mat.size(); ++i) {
    int64_t m = h.target.moduli[i / size_t(h.cols())];
    h.mat[i] = (h.mat[i] + g.mat[i]) % m;
  }
  return h;
}

/// Canonical basis {e_ij} of Hom(B, A): e_ij sends b_j to
/// p^{max(0, alpha_i - beta_j)} a_i and every other generator to 0.
/// Ordered by (i, j) lexicographic, both 1-based in the slot sense.
inline std::vector<Homomorphism> hom_basis(const AbelianShape& B, const AbelianShape& A) {
  std::vector<Homomorphism> basis;
  basis.reserve(size_t(A.factors()) * size_t(B.factors()));
  for (int i = 0; i < A.factors(); ++i)
    for (int j = 0; j < B.factors(); ++j) {
      Homomorphism e = hom_zero(B, A);
      e.at(i, j) = ipow(A.p, std::max(0, A.alphas[size_t(i)] - B.alphas[size_t(j)]));
      basis.push_back(std::move(e));
    }
  return basis;
}

/// |Hom(A,B)| = prod p^{min(alpha_j, beta_i)}, saturating at UINT64_MAX.
inline uint64_t hom_count(const AbelianShape& A, const AbelianShape& B) {
  if (A.p != B.p) throw ShapeMismatch("hom spaces require a common prime");
  unsigned __int128 c = 1;
  for (int i = 0; i < B.factors(); ++i)
    for (int j = 0; j < A.factors(); ++j) {
      c *= (unsigned __int128)ipow(A.p, std::min(A.alphas[size_t(j)], B.alphas[size_t(i)]));
      if (c > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
    }
  return uint64_t(c);
}

/// Random-access enumeration of Hom(A, B): index k yields the k-th matrix in
/// lexicographic order of entry tuples (row-major, last entry fastest).
/// Partition the index range freely for parallel consumption.
class HomEnumerator {
public:
  HomEnumerator(const AbelianShape& A, const AbelianShape& B,
                uint64_t guard = kDefaultHomGuard)
      : A_(A), B_(B) {
    count_ = hom_count(A, B);
    if (count_ > guard) throw GuardExceeded("hom space enumeration", count_, guard);
    const int n = A.factors(), m = B.factors();
    radix_.resize(size_t(m) * size_t(n));
    step_.resize(size_t(m) * size_t(n));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        size_t k = size_t(i) * size_t(n) + size_t(j);
        radix_[k] = ipow(A.p, std::min(A.alphas[size_t(j)], B.alphas[size_t(i)]));
        step_[k] = ipow(A.p, std::max(0, B.alphas[size_t(i)] - A.alphas[size_t(j)]));
      }
  }

  static constexpr uint64_t kDefaultHomGuard = uint64_t{1} << 20;

  uint64_t size() const { return count_; }

  Homomorphism at(uint64_t index) const {
    Homomorphism h = hom_zero(A_, B_);
    for (size_t k = radix_.size(); k-- > 0;) {
      uint64_t digit = index % uint64_t(radix_[k]);
      index /= uint64_t(radix_[k]);
      h.mat[k] = int64_t(digit) * step_[k];
    }
    return h;
  }

  /// Index of a homomorphism in this enumeration (inverse of at()).
  uint64_t index_of(const Homomorphism& h) const {
    uint64_t idx = 0;
    for (size_t k = 0; k < radix_.size(); ++k)
      idx = idx * uint64_t(radix_[k]) + uint64_t(h.mat[k] / step_[k]);
    return idx;
  }

private:
  AbelianShape A_, B_;
  uint64_t count_ = 0;
  std::vector<int64_t> radix_, step_;
};

// ---------------------------------------------------------------------------
// Subgroup: a materialized element set, stored as sorted ranks

struct Subgroup {
  AbelianShape ambient;
  std::vector<uint64_t> ranks;  // sorted ascending, always contains 0

  uint64_t size() const { return ranks.size(); }
  bool contains(uint64_t r) const {
    return std::binary_search(ranks.begin(), ranks.end(), r);
  }
  bool contains(const Element& x) const { return contains(rank_of(ambient, x)); }
  std::vector<Element> elements() const {
    std::vector<Element> out;
    out.reserve(ranks.size());
    for (uint64_t r : ranks) out.push_back(unrank(ambient, r));
    return out;
  }
};

inline constexpr uint64_t kMaterializeGuard = uint64_t{1} << 22;

inline void check_materializable(const AbelianShape& s) {
  if (s.order > kMaterializeGuard)
    throw GuardExceeded("subgroup materialization", s.order, kMaterializeGuard);
}

inline Subgroup trivial_subgroup(const AbelianShape& s) { return Subgroup{s, {0}}; }

inline Subgroup full_subgroup(const AbelianShape& s) {
  check_materializable(s);
  Subgroup g{s, {}};
  g.ranks.resize(s.order);
  for (uint64_t r = 0; r < s.order; ++r) g.ranks[r] = r;
  return g;
}

namespace detail {
/// Product of per-coordinate subsets {t * p^k mod p^alpha_i : t}. Covers both
/// p^k B (step p^k) and A[p^k] (step p^{max(0, alpha_i - k)}).
inline Subgroup coordinate_product(const AbelianShape& s, const std::vector<int64_t>& gen_step) {
  std::vector<uint64_t> ranks{0};
  for (int i = 0; i < s.factors(); ++i) {
    int64_t step = gen_step[size_t(i)];
    int64_t count = step == 0 ? 1 : s.moduli[size_t(i)] / step;
    if (count <= 1) continue;
    std::vector<uint64_t> next;
    next.reserve(ranks.size() * size_t(count));
    for (uint64_t base : ranks)
      for (int64_t t = 0; t < count; ++t)
        next.push_back(base + uint64_t(t * step) * s.strides[size_t(i)]);
    ranks = std::move(next);
    if (ranks.size() > kMaterializeGuard)
      throw GuardExceeded("subgroup materialization", ranks.size(), kMaterializeGuard);
  }
  std::sort(ranks.begin(), ranks.end());
  return Subgroup{s, std::move(ranks)};
}
}  // namespace detail

/// p^k B = {p^k x : x in B}.
inline Subgroup power_subgroup(const AbelianShape& B, int k) {
  if (k < 0) throw ShapeMismatch("power subgroup needs k >= 0");
  std::vector<int64_t> step(size_t(B.factors()));
  for (int i = 0; i < B.factors(); ++i) {
    int e = std::min(k, B.alphas[size_t(i)]);
    step[size_t(i)] = e == B.alphas[size_t(i)] ? 0 : ipow(B.p, e);
  }
  return detail::coordinate_product(B, step);
}

/// A[p^k] = {x : p^k x = 0}.
inline Subgroup torsion_subgroup(const AbelianShape& A, int k) {
  if (k < 0) throw ShapeMismatch("torsion subgroup needs k >= 0");
  std::vector<int64_t> step(size_t(A.factors()));
  for (int i = 0; i < A.factors(); ++i) {
    int e = std::max(0, A.alphas[size_t(i)] - k);
    step[size_t(i)] = e == A.alphas[size_t(i)] ? 0 : ipow(A.p, e);
  }
  return detail::coordinate_product(A, step);
}

inline Subgroup kernel(const Homomorphism& h) {
  check_materializable(h.source);
  Subgroup g{h.source, {}};
  for (uint64_t r = 0; r < h.source.order; ++r)
    if (is_zero(hom_apply(h, unrank(h.source, r)))) g.ranks.push_back(r);
  return g;
}

inline Subgroup image_of(const Homomorphism& h, const Subgroup& S) {
  if (S.ambient != h.source) throw ShapeMismatch("subgroup does not live in hom source");
  std::vector<uint64_t> out;
  out.reserve(S.ranks.size());
  for (uint64_t r : S.ranks) out.push_back(rank_of(h.target, hom_apply(h, unrank(S.ambient, r))));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Subgroup{h.target, std::move(out)};
}

inline Subgroup image(const Homomorphism& h) { return image_of(h, full_subgroup(h.source)); }

/// Closure of a generating set under addition.
inline Subgroup span(const AbelianShape& s, const std::vector<Element>& gens) {
  std::vector<uint64_t> have{0};
  for (const Element& g : gens) {
    if (is_zero(g)) continue;
    // fold <g> into every current member
    std::vector<uint64_t> next = have;
    for (uint64_t base : have) {
      Element acc = unrank(s, base);
      while (true) {
        acc = add(s, acc, g);
        uint64_t r = rank_of(s, acc);
        if (r == base) break;
        next.push_back(r);
        if (next.size() > kMaterializeGuard)
          throw GuardExceeded("subgroup span", next.size(), kMaterializeGuard);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    have = std::move(next);
  }
  return Subgroup{s, std::move(have)};
}

inline uint64_t exponent_of(const Subgroup& S) {
  int t = 0;
  for (uint64_t r : S.ranks) t = std::max(t, order_exponent(S.ambient, unrank(S.ambient, r)));
  return uint64_t(ipow(S.ambient.p, t));
}

inline int exponent_exp_of(const Subgroup& S) {
  int t = 0;
  for (uint64_t r : S.ranks) t = std::max(t, order_exponent(S.ambient, unrank(S.ambient, r)));
  return t;
}

inline bool subgroup_eq(const Subgroup& S, const Subgroup& T) {
  return S.ambient == T.ambient && S.ranks == T.ranks;
}

inline bool subgroup_le(const Subgroup& S, const Subgroup& T) {
  if (S.ambient != T.ambient) return false;
  return std::includes(T.ranks.begin(), T.ranks.end(), S.ranks.begin(), S.ranks.end());
}

/// Whether S/K is cyclic: some coset xK must have order |S|/|K| in the
/// quotient. Scans coset representatives; requires K <= S.
inline bool quotient_is_cyclic(const Subgroup& S, const Subgroup& K) {
  if (!subgroup_le(K, S)) throw NotASubgroup("quotient requires K <= S");
  uint64_t target = S.size() / K.size();
  if (target == 1) return true;
  const AbelianShape& s = S.ambient;
  for (uint64_t r : S.ranks) {
    Element x = unrank(s, r);
    // coset order = least p^e with p^e x in K
    uint64_t ord = 1;
    Element y = x;
    while (!K.contains(y)) {
      y = scalar_mul(s, s.p, y);
      ord *= uint64_t(s.p);
    }
    if (ord == target) return true;
  }
  return false;
}

/// Exponent (as a power-of-p exponent) of the quotient group Amb(S)/S over a
/// full ambient: exponent of B / im, used for cokernels.
inline int quotient_exponent_exp(const AbelianShape& B, const Subgroup& im) {
  if (im.ambient != B) throw ShapeMismatch("image does not live in the expected ambient");
  check_materializable(B);
  int best = 0;
  for (uint64_t r = 0; r < B.order; ++r) {
    Element x = unrank(B, r);
    int e = 0;
    Element y = x;
    while (!im.contains(y)) {
      y = scalar_mul(B, B.p, y);
      ++e;
    }
    best = std::max(best, e);
  }
  return best;
}

/// Membership x in p^k B, decided arithmetically.
inline bool in_power_subgroup(const AbelianShape& B, const Element& x, int k) {
  for (int i = 0; i < B.factors(); ++i) {
    int need = std::min(k, B.alphas[size_t(i)]);
    if (x[size_t(i)] % ipow(B.p, need) != 0) return false;
  }
  return true;
}

/// Membership x in the cyclic subgroup <p^k b_j> (0-based j).
inline bool in_cyclic_power(const AbelianShape& B, const Element& x, int k, int j) {
  for (int i = 0; i < B.factors(); ++i) {
    if (i == j) {
      int need = std::min(k, B.alphas[size_t(i)]);
      if (x[size_t(i)] % ipow(B.p, need) != 0) return false;
    } else if (x[size_t(i)] != 0) {
      return false;
    }
  }
  return true;
}

/// Whether a materialized subgroup is cyclic.
inline bool subgroup_is_cyclic(const Subgroup& S) {
  uint64_t n = S.size();
  for (uint64_t r : S.ranks)
    if (uint64_t(order_of(S.ambient, unrank(S.ambient, r))) == n) return true;
  return false;
}

}  // namespace cmapkernel
