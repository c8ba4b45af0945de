// Cyclic rational-spectrum factors, the skew map F(T,p) and product
// correlations built on the tower engine.
#pragma once

#include "rankone/correlation.hpp"
#include "rankone/permutation.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rankone {

/// Shift by +1 on Z_m with uniform probability.
struct CyclicFactor {
  std::int64_t order = 1;
};

/// A subset of Z_m.
class GroupSet {
 public:
  GroupSet(std::int64_t order, std::vector<std::int64_t> elements)
      : order_(order), elems_(std::move(elements)) {
    if (order_ < 1) throw std::invalid_argument("group order must be >= 1");
    for (auto e : elems_)
      if (e < 0 || e >= order_) throw std::invalid_argument("group element out of range");
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  static GroupSet whole(std::int64_t order) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(order));
    for (std::int64_t i = 0; i < order; ++i) e[static_cast<std::size_t>(i)] = i;
    return GroupSet(order, std::move(e));
  }

  std::int64_t order() const { return order_; }
  const std::vector<std::int64_t>& elements() const { return elems_; }
  bool contains(std::int64_t x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }
  Rational measure() const { return make_rational(from_u64(elems_.size()), from_i64(order_)); }

 private:
  std::int64_t order_;
  std::vector<std::int64_t> elems_;
};

inline std::int64_t mod_floor(const Int& a, std::int64_t m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), from_i64(m).get_mpz_t());
  return static_cast<std::int64_t>(to_u64(r));
}

/// nu(D ∩ S^n E) = |D ∩ (E + n mod m)| / m.
inline Rational s_correlation(const GroupSet& d, const GroupSet& e, const Int& n) {
  if (d.order() != e.order()) throw std::invalid_argument("group orders differ");
  const std::int64_t m = d.order();
  const std::int64_t shift = mod_floor(n, m);
  std::int64_t hits = 0;
  for (auto x : e.elements())
    if (d.contains((x + shift) % m)) ++hits;
  return make_rational(from_i64(hits), from_i64(m));
}

/// (mu x nu)((A x D) ∩ (T x S)^n (B x E)): the factor part is exact, so the
/// tower interval is scaled by it.
inline MeasureInterval product_correlation(const CellSet& a, const GroupSet& d, const CellSet& b,
                                           const GroupSet& e, const Int& n, const Rational& tol,
                                           const TowerGeometry& g,
                                           const CorrelationOptions& opts = {}) {
  const Rational f = s_correlation(d, e, n);
  if (f == 0) return MeasureInterval::point(0);
  return correlation(a, b, n, tol / f, g, opts).scaled(f);
}

/// The skew map F(T,p) on X x Z_p: T acts only when leaving fiber 0.
struct SkewSystem {
  std::int64_t p = 2;
  bool p_is_prime() const {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) return false;
    return true;
  }
};

/// Net power of T applied by F^n starting in fiber z0.
/// n >= 0: #{k in [0,n) : z0 + k ≡ 0}; n < 0: -#{k in [1,|n|] : z0 - k ≡ 0}.
inline Int skew_passages(std::int64_t z0, const Int& n, std::int64_t p) {
  if (p < 2) throw std::invalid_argument("skew order p must be > 1");
  if (z0 < 0 || z0 >= p) throw std::invalid_argument("fiber label out of range");
  const Int P = from_i64(p);
  if (n >= 0) {
    // first hit at k = (p - z0) mod p, then every p steps
    const Int first = from_i64((p - z0) % p);
    return n > first ? floor_div(n - first - 1, P) + 1 : Int(0);
  }
  const Int steps = -n;
  const Int first = from_i64(z0 == 0 ? p : z0);
  return steps >= first ? -(floor_div(steps - first, P) + 1) : Int(0);
}

/// mu(A ∩ T^q B) on fiber z when (A x {z}) is met by F^n(B x {z'}), zero
/// otherwise. Measured fibre-wise: multiply by 1/p for mu x nu.
inline MeasureInterval skew_correlation(const CellSet& a, std::int64_t z, const CellSet& b,
                                        std::int64_t z_prime, const Int& n, const Rational& tol,
                                        const SkewSystem& sys, const TowerGeometry& g,
                                        const CorrelationOptions& opts = {}) {
  if (z < 0 || z >= sys.p) throw std::invalid_argument("fiber label out of range");
  if (mod_floor(from_i64(z - z_prime) - n, sys.p) != 0) return MeasureInterval::point(0);
  return correlation(a, b, skew_passages(z_prime, n, sys.p), tol, g, opts);
}

}  // namespace rankone
