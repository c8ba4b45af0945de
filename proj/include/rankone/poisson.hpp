// Monte-Carlo Poisson suspension over a finite tower window.
//
// A configuration is a Poisson sample of intensity mu restricted to X_K.
// P(T) moves every point by T, so N(A)(P(T)^n w) = #{x in w : T^n x in A}.
// Point dynamics are exact: a point is (stage, level, frac) with frac the
// rational position inside its level; crossing a tower top re-addresses it
// in the next tower through the column its frac selects.
#pragma once

#include "rankone/correlation.hpp"
#include "rankone/parallel.hpp"

#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rankone {

struct Point {
  int stage = 1;
  Int level;
  Rational frac;  // in [0, 1), position inside the level in units of w_stage

  Rational offset(const TowerGeometry& g) const { return frac * g.width(stage); }
  friend bool operator==(const Point&, const Point&) = default;
};

struct Configuration {
  int window_stage = 1;
  std::vector<Point> points;
};

struct SamplerOptions {
  unsigned precision_bits = 128;
  /// Stages above the window that dynamics may visit; columns of all of
  /// them must be separable at `precision_bits`.
  int headroom = 0;
};

/// Deepest stage whose columns a `bits`-bit offset drawn at stage K can
/// still separate: prod_{i=K}^{K'-1} r_i <= 2^bits.
inline int precision_limit(const TowerGeometry& g, int K, unsigned bits) {
  const Int cap = pow2(bits);
  Int prod = 1;
  int k = K;
  while (k < g.depth()) {
    prod *= from_i64(g.cuts(k));
    if (prod > cap) break;
    ++k;
  }
  return k;
}

/// Reproducible engine for configuration `index` of a run seeded by `seed`.
inline std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline Configuration sample_configuration(const TowerGeometry& g, int K, std::uint64_t seed,
                                          std::uint64_t index = 0,
                                          const SamplerOptions& opts = {}) {
  if (K + opts.headroom > g.depth())
    throw DepthCapError("window headroom exceeds derived geometry", K + opts.headroom);
  if (opts.precision_bits == 0 || opts.precision_bits % 64 != 0)
    throw PrecisionError("precision_bits must be a positive multiple of 64");
  if (precision_limit(g, K, opts.precision_bits) < K + opts.headroom)
    throw PrecisionError("offsets of " + std::to_string(opts.precision_bits) +
                         " bits cannot separate the columns of stage " +
                         std::to_string(K + opts.headroom));
  const Int& h = g.height(K);
  if (!fits_u64(h - 1)) throw PrecisionError("window height exceeds 64-bit level sampling");

  auto eng = sample_engine(seed, index);
  boost::random::poisson_distribution<std::uint64_t, double> count_dist(g.measure(K).get_d());
  boost::random::uniform_int_distribution<std::uint64_t> level_dist(0, to_u64(h - 1));
  const std::uint64_t n = count_dist(eng);
  const Int denom = pow2(opts.precision_bits);

  Configuration c{K, {}};
  c.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Point p;
    p.stage = K;
    p.level = from_u64(level_dist(eng));
    Int u = 0;
    for (unsigned b = 0; b < opts.precision_bits; b += 64) u = (u << 64) + from_u64(eng());
    p.frac = make_rational(u, denom);
    c.points.push_back(std::move(p));
  }
  return c;
}

/// Re-addresses p in tower p.stage + 1 through the column its frac selects.
inline void ascend(Point& p, const TowerGeometry& g, int max_stage = 1 << 30) {
  const int j = p.stage;
  if (j >= max_stage)
    throw PrecisionError("point dynamics need stage " + std::to_string(j + 1) +
                         " beyond the offset precision");
  if (j >= g.depth())
    throw DepthCapError("point dynamics need stage " + std::to_string(j + 1), j + 1);
  Rational y = p.frac * Rational(from_i64(g.cuts(j)));
  Int c = floor(y);
  p.frac = y - Rational(c);
  p.level += g.offsets(j)[static_cast<std::size_t>(to_u64(c))];
  p.stage = j + 1;
}

/// T^n x. The result is re-expressed at the lowest stage >= x.stage that
/// contains it. Ascending beyond `max_stage` raises PrecisionError.
inline Point apply_T(const Point& x, const Int& n, const TowerGeometry& g, int max_stage = 1 << 30) {
  Point p = x;
  if (n >= 0) {
    while (p.level + n >= g.height(p.stage)) ascend(p, g, max_stage);
  } else {
    while (p.level + n < 0) ascend(p, g, max_stage);
  }
  p.level += n;
  while (p.stage > x.stage) {
    auto hit = g.locate(p.stage - 1, p.level);
    if (!hit.in_body) break;
    p.frac = (Rational(from_u64(hit.column)) + p.frac) / Rational(from_i64(g.cuts(p.stage - 1)));
    p.level = hit.within;
    --p.stage;
  }
  return p;
}

/// Membership of a point in a level set of a lower (or equal) stage.
inline bool contains(const CellSet& a, const Point& p, const TowerGeometry& g) {
  Point q = p;
  while (q.stage < a.stage()) ascend(q, g);
  auto lvl = g.descend(q.stage, q.level, a.stage());
  return lvl && a.contains(*lvl);
}

struct ExperimentOptions {
  Rational tol = Rational(1, 1000000);  // escaping-mass budget and target width
  unsigned jobs = 1;
  unsigned precision_bits = 128;
  bool keep_counts = false;
  CorrelationOptions correlation;
};

struct ExperimentResult {
  std::uint64_t samples = 0;
  int window_stage = 0;
  double empirical = 0;
  Rational target;         // exact reference the statistic is compared against
  MeasureInterval exact;   // correlation interval behind the target
  double stderr_ = 0;
  double z = 0;
  bool pass = false;
  // exact integer sums over samples, for regression
  Int sum_a, sum_b, sum_ab, sum_abs_diff;
  std::vector<std::uint64_t> counts_a, counts_b;
};

/// Certified bound on mu(A) \ T^n X_K: mass of A whose T^{-n} preimage may
/// leave the window (bottom n levels of tower K for n > 0, top |n| for n < 0).
inline Rational window_escape_bound(const TowerGeometry& g, const CellSet& a, const Int& n, int K) {
  LevelCounter ca(g, a);
  const Int& h = g.height(K);
  Int lo = n >= 0 ? Int(0) : h + n;
  Int hi = n >= 0 ? n : h;
  if (lo < 0) lo = 0;
  if (hi > h) hi = h;
  return Rational(ca.in_range(K, lo, hi)) * g.width(K);
}

/// Smallest window stage >= the sets' stage with escape bound below tol.
inline int required_window(const TowerGeometry& g, const CellSet& a, const CellSet& b,
                           const Int& n, const Rational& tol) {
  for (int K = std::max(a.stage(), b.stage()); K <= g.depth(); ++K)
    if (window_escape_bound(g, a, n, K) < tol) return K;
  throw DepthCapError("no derived window keeps escaping mass below tol", g.depth() + 1);
}

namespace detail {

inline void check_window(const TowerGeometry& g, const CellSet& a, const CellSet& b, const Int& n,
                         int K, const Rational& tol) {
  if (K < std::max(a.stage(), b.stage()))
    throw ConfigError("window stage below the sets' stage");
  if (window_escape_bound(g, a, n, K) >= tol)
    throw ConfigError("window stage " + std::to_string(K) +
                      " too small: escaping mass above tol, need window_stage >= " +
                      std::to_string(required_window(g, a, b, n, tol)));
}

struct PairCounts {
  std::uint64_t moved = 0;  // #{x : T^n x in A}
  std::uint64_t here = 0;   // #{x in B}
};

inline std::vector<PairCounts> run_counts(const TowerGeometry& g, const CellSet& a,
                                          const CellSet& b, const Int& n, int K, std::uint64_t m,
                                          std::uint64_t seed, const ExperimentOptions& opts) {
  const int limit = std::min(precision_limit(g, K, opts.precision_bits), g.depth());
  SamplerOptions so{opts.precision_bits, limit - K};
  return parallel_map<PairCounts>(m, opts.jobs, [&](std::size_t i) {
    auto cfg = sample_configuration(g, K, seed, i, so);
    PairCounts pc;
    for (const auto& x : cfg.points) {
      if (contains(b, x, g)) ++pc.here;
      if (contains(a, apply_T(x, n, g, limit), g)) ++pc.moved;
    }
    return pc;
  });
}

}  // namespace detail

/// Cov(N(A)∘P(T)^n, N(B)) over m configurations against mu(T^{-n}A ∩ B).
inline ExperimentResult covariance_experiment(const TowerGeometry& g, const CellSet& a,
                                              const CellSet& b, const Int& n, int K,
                                              std::uint64_t m, std::uint64_t seed,
                                              const ExperimentOptions& opts = {}) {
  if (m < 2) throw ConfigError("covariance experiment needs at least 2 samples");
  detail::check_window(g, a, b, n, K, opts.tol);
  ExperimentResult res;
  res.samples = m;
  res.window_stage = K;
  res.exact = correlation(a, b, n, opts.tol, g, opts.correlation);
  res.target = res.exact.mid();

  auto counts = detail::run_counts(g, a, b, n, K, m, seed, opts);
  res.sum_a = res.sum_b = res.sum_ab = res.sum_abs_diff = 0;
  for (const auto& c : counts) {
    res.sum_a += from_u64(c.moved);
    res.sum_b += from_u64(c.here);
    res.sum_ab += from_u64(c.moved) * from_u64(c.here);
    res.sum_abs_diff += from_u64(c.moved > c.here ? c.moved - c.here : c.here - c.moved);
  }
  const Rational M(from_u64(m));
  const Rational cov = (Rational(res.sum_ab) - Rational(res.sum_a) * Rational(res.sum_b) / M) /
                       (M - 1);
  res.empirical = cov.get_d();

  const double ma = Rational(Rational(res.sum_a) / M).get_d();
  const double mb = Rational(Rational(res.sum_b) / M).get_d();
  double s1 = 0, s2 = 0;
  for (const auto& c : counts) {
    double y = (static_cast<double>(c.moved) - ma) * (static_cast<double>(c.here) - mb);
    s1 += y;
    s2 += y * y;
  }
  const double md = static_cast<double>(m);
  const double var = (s2 - s1 * s1 / md) / (md - 1);
  res.stderr_ = std::sqrt(std::max(var, 0.0) / md);
  const double diff = res.empirical - res.target.get_d();
  res.z = res.stderr_ > 0 ? diff / res.stderr_ : (diff == 0 ? 0.0 : INFINITY);
  res.pass = std::abs(res.z) <= 4;
  if (opts.keep_counts)
    for (const auto& c : counts) {
      res.counts_a.push_back(c.moved);
      res.counts_b.push_back(c.here);
    }
  return res;
}

/// E|N(A)∘P(T)^n - N(A)| against the exact upper bound on mu(A Δ T^n A),
/// 2 mu(A) - 2 lo where lo bounds mu(A ∩ T^n A) from below.
inline ExperimentResult suspension_rigidity_experiment(const TowerGeometry& g, const CellSet& a,
                                                       const Int& n, int K, std::uint64_t m,
                                                       std::uint64_t seed,
                                                       const ExperimentOptions& opts = {}) {
  if (m < 2) throw ConfigError("rigidity experiment needs at least 2 samples");
  detail::check_window(g, a, a, n, K, opts.tol);
  ExperimentResult res;
  res.samples = m;
  res.window_stage = K;
  res.exact = correlation(a, a, n, opts.tol, g, opts.correlation);
  res.target = 2 * a.measure(g) - 2 * res.exact.lo;

  auto counts = detail::run_counts(g, a, a, n, K, m, seed, opts);
  res.sum_a = res.sum_b = res.sum_ab = res.sum_abs_diff = 0;
  double s1 = 0, s2 = 0;
  for (const auto& c : counts) {
    const std::uint64_t d = c.moved > c.here ? c.moved - c.here : c.here - c.moved;
    res.sum_a += from_u64(c.moved);
    res.sum_b += from_u64(c.here);
    res.sum_ab += from_u64(c.moved) * from_u64(c.here);
    res.sum_abs_diff += from_u64(d);
    s1 += static_cast<double>(d);
    s2 += static_cast<double>(d) * static_cast<double>(d);
  }
  const double md = static_cast<double>(m);
  res.empirical = Rational(Rational(res.sum_abs_diff) / Rational(from_u64(m))).get_d();
  const double var = (s2 - s1 * s1 / md) / (md - 1);
  res.stderr_ = std::sqrt(std::max(var, 0.0) / md);
  const double diff = res.empirical - res.target.get_d();
  res.z = res.stderr_ > 0 ? diff / res.stderr_ : (diff <= 0 ? 0.0 : INFINITY);
  res.pass = res.empirical <= res.target.get_d() + 4 * res.stderr_;
  if (opts.keep_counts)
    for (const auto& c : counts) {
      res.counts_a.push_back(c.moved);
      res.counts_b.push_back(c.here);
    }
  return res;
}

}  // namespace rankone
