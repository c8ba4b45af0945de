// Exact interval bounds on mu(A ∩ T^n B) for level sets of a rank-one tower.
//
// At tower K every point of B sits on some level m. When 0 <= m + n < h_K the
// point moves inside the tower and T^n lands it on level m + n, so whether it
// meets A is decided exactly. Points whose orbit leaves the tower are counted
// as unresolved: they widen the interval instead of being guessed.
//
// Refining A and B to tower K would cost prod r_j ranges. Instead the resolved
// count is computed by recursion on the column structure: a window of tower
// K is split by the columns of tower K-1, each column piece is shifted onto
// at most two column bodies, and the pair (column, target column) reduces to
// the same question one tower lower with shift n + o(c) - o(c'). Regular
// columns produce identical sub-problems, which are memoised.
#pragma once

#include "rankone/cellset.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace rankone {

struct CorrelationOptions {
  /// Deepest tower the search may use.
  int depth_cap = 64;
};

/// Counts levels of tower K whose descent lands in a fixed set of tower s.
class LevelCounter {
 public:
  LevelCounter(const TowerGeometry& g, const CellSet& set) : g_(g), set_(set) {}

  /// Levels of tower K (K >= set stage) that belong to the set.
  Int full(int K) const {
    Int n = set_.level_count();
    for (int j = set_.stage(); j < K; ++j) n *= from_i64(g_.cuts(j));
    return n;
  }

  /// Set levels of tower K inside [0, x).
  Int below(int K, const Int& x) const {
    Int acc = 0;
    Int cur = x;
    for (int k = K; ; --k) {
      if (cur <= 0) return acc;
      if (cur >= g_.height(k)) return acc + full(k);
      if (k == set_.stage()) return acc + set_.count_below(cur);
      const int j = k - 1;
      auto hit = g_.locate(j, cur);
      acc += from_u64(hit.column) * full(j);
      cur = hit.within < g_.height(j) ? hit.within : g_.height(j);
    }
  }

  Int in_range(int K, const Int& lo, const Int& hi) const {
    return hi <= lo ? Int(0) : below(K, hi) - below(K, lo);
  }

 private:
  const TowerGeometry& g_;
  const CellSet& set_;
};

/// Counts levels m of tower K with m in B, m + n in A, both inside the tower.
class ShiftCounter {
 public:
  ShiftCounter(const TowerGeometry& g, const CellSet& a, const CellSet& b) : g_(g), a_(a), b_(b) {
    if (a.stage() != b.stage()) throw std::invalid_argument("sets at different stages");
  }

  Int count(int K, const Int& n) { return count(K, n, Int(0), g_.height(K)); }

  /// Restricted to m in [lo, hi).
  Int count(int K, const Int& n, const Int& lo_in, const Int& hi_in) {
    const Int& h = g_.height(K);
    Int lo = lo_in, hi = hi_in;
    if (lo < 0) lo = 0;
    if (lo < -n) lo = -n;
    if (hi > h) hi = h;
    if (hi > h - n) hi = h - n;
    if (lo >= hi) return 0;
    if (K == a_.stage()) return base_count(n, lo, hi);

    auto key = std::make_tuple(K, n, lo, hi);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int j = K - 1;
    const Int& hj = g_.height(j);
    const auto& off = g_.offsets(j);
    const std::size_t r = off.size();
    Int total = 0;
    for (std::size_t c = g_.locate(j, lo).column; c < r && off[c] < hi; ++c) {
      Int alpha = lo > off[c] ? lo : off[c];
      Int beta = off[c] + hj;
      if (beta > hi) beta = hi;
      if (alpha >= beta) continue;
      Int tlo = alpha + n, thi = beta + n;
      for (std::size_t d = g_.locate(j, tlo).column; d < r && off[d] < thi; ++d) {
        Int gam = tlo > off[d] ? tlo : off[d];
        Int del = off[d] + hj;
        if (del > thi) del = thi;
        if (gam >= del) continue;
        Int base = n + off[c];
        total += count(j, base - off[d], gam - base, del - base);
      }
    }
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  // |B ∩ [lo, hi) ∩ (A - n)| at the sets' own stage.
  Int base_count(const Int& n, const Int& lo, const Int& hi) const {
    Int total = 0;
    const auto& ar = a_.ranges();
    const auto& br = b_.ranges();
    std::size_t i = 0, k = 0;
    while (i < br.size() && k < ar.size()) {
      Int x = br[i].lo, y = br[i].hi;
      Int u = ar[k].lo - n, v = ar[k].hi - n;
      Int s = x;
      if (u > s) s = u;
      if (lo > s) s = lo;
      Int e = y;
      if (v < e) e = v;
      if (hi < e) e = hi;
      if (s < e) total += e - s;
      (y < v) ? ++i : ++k;
    }
    return total;
  }

  const TowerGeometry& g_;
  const CellSet& a_;
  const CellSet& b_;
  std::map<std::tuple<int, Int, Int, Int>, Int> memo_;
};

/// mu(A ∩ T^n B) resolved at tower K. The interval is exact on mass that
/// stays inside tower K; the rest is bounded by the smaller of B's escaping
/// mass (pushing B forward) and A's escaping mass (pulling A back).
inline MeasureInterval correlation_at_stage(const CellSet& a, const CellSet& b, const Int& n,
                                            int K, const TowerGeometry& g,
                                            ShiftCounter* shared = nullptr) {
  if (a.stage() != b.stage()) throw std::invalid_argument("A and B must share a stage");
  if (K < a.stage()) throw std::invalid_argument("resolving tower below the sets' stage");
  a.check_bounds(g);
  b.check_bounds(g);
  const Int& h = g.height(K);
  const Rational& w = g.width(K);
  LevelCounter ca(g, a), cb(g, b);

  Int resolved;
  if (abs(n) < h) {
    if (shared) {
      resolved = shared->count(K, n);
    } else {
      ShiftCounter sc(g, a, b);
      resolved = sc.count(K, n);
    }
  }
  Int esc_b, esc_a;
  if (n >= 0) {
    esc_b = cb.in_range(K, h - n, h);
    esc_a = ca.in_range(K, Int(0), n);
  } else {
    esc_b = cb.in_range(K, Int(0), -n);
    esc_a = ca.in_range(K, h + n, h);
  }
  Int slack = esc_a < esc_b ? esc_a : esc_b;
  Rational lo = Rational(resolved) * w;
  return {lo, lo + Rational(slack) * w};
}

struct CorrelationResult {
  MeasureInterval interval;
  int stage;  // tower at which the tolerance was met
};

/// Deepens the resolving tower until the interval width is at most `tol`.
inline CorrelationResult correlation_detail(const CellSet& a_in, const CellSet& b_in,
                                            const Int& n, const Rational& tol,
                                            const TowerGeometry& g,
                                            const CorrelationOptions& opts = {}) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  const int s = std::max(a_in.stage(), b_in.stage());
  const CellSet a = refine(a_in, s, g);
  const CellSet b = refine(b_in, s, g);
  if (n == 0) return {MeasureInterval::point(set_intersection(a, b).measure(g)), s};

  const int last = std::min(g.depth(), opts.depth_cap);
  ShiftCounter counter(g, a, b);
  int K = s;
  while (K < last && abs(n) >= g.height(K)) ++K;
  for (; K <= last; ++K) {
    auto iv = correlation_at_stage(a, b, n, K, g, &counter);
    if (iv.width() <= tol) return {iv, K};
  }
  const bool capped = opts.depth_cap < g.depth();
  throw DepthCapError(std::string("correlation tolerance not reached by tower ") +
                          std::to_string(last) + (capped ? " (depth cap)" : " (schedule depth)"),
                      last + 1);
}

inline MeasureInterval correlation(const CellSet& a, const CellSet& b, const Int& n,
                                   const Rational& tol, const TowerGeometry& g,
                                   const CorrelationOptions& opts = {}) {
  return correlation_detail(a, b, n, tol, g, opts).interval;
}

/// 2^-40 · mu(A), the default width target.
inline Rational default_tolerance(const CellSet& a, const TowerGeometry& g) {
  Rational t = a.measure(g) / Rational(pow2(40));
  return t > 0 ? t : Rational(1, 1) / Rational(pow2(40));
}

}  // namespace rankone
