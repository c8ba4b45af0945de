// Scans over stage subsequences: rigidity, the a·I weak limit, product
// rigidity times, and the a versus a^2 separation for T x T.
//
// Every row is an exact rational combination of tower intervals; no
// arithmetic happens here beyond that.
#pragma once

#include "rankone/correlation.hpp"
#include "rankone/parallel.hpp"
#include "rankone/product.hpp"

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rankone {

struct ScanOptions {
  CorrelationOptions correlation;
  unsigned jobs = 1;
};

struct RigidityRow {
  int stage = 0;
  Int n;
  MeasureInterval value;
  Rational reference;
  Rational bound;
  bool pass = false;

  Rational deviation() const { return abs(value.mid() - reference); }
};

struct RigidityReport {
  std::vector<RigidityRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

struct WeakLimitRow {
  int stage = 0;
  Int n;
  MeasureInterval value;
  Rational target;
  bool pass = false;
};

struct WeakLimitReport {
  Rational a;
  std::vector<WeakLimitRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

inline void require_stage(const TowerGeometry& g, int stage, int set_stage, StageKind kind) {
  if (stage <= set_stage)
    throw ConfigError("scan stage " + std::to_string(stage) + " must exceed the sets' stage " +
                      std::to_string(set_stage));
  if (stage >= g.depth())
    throw DepthCapError("scan stage " + std::to_string(stage) + " has no cutting data", stage + 1);
  if (g.cutting(stage).kind != kind)
    throw ConfigError("stage " + std::to_string(stage) + " is " + to_string(g.cutting(stage).kind) +
                      ", scan requires " + to_string(kind));
}

inline void require_common(const CellSet& a, const CellSet& b) {
  if (a.stage() != b.stage()) throw ConfigError("A and B must be given at the same stage");
}

}  // namespace detail

/// |mu(A ∩ T^{h_j} B) - mu(A ∩ B)| <= (mu(A) + mu(B)) / r_j along rigid stages.
inline RigidityReport rigidity_scan(const TowerGeometry& g, const CellSet& a, const CellSet& b,
                                    const std::vector<int>& stages, const ScanOptions& opts = {}) {
  detail::require_common(a, b);
  for (int j : stages) detail::require_stage(g, j, a.stage(), StageKind::RigidJ);
  const Rational ma = a.measure(g), mb = b.measure(g);
  const Rational ref = set_intersection(a, b).measure(g);
  RigidityReport rep;
  rep.rows = parallel_map<RigidityRow>(stages.size(), opts.jobs, [&](std::size_t i) {
    RigidityRow row;
    row.stage = stages[i];
    row.n = g.height(row.stage);
    row.reference = ref;
    row.bound = (ma + mb) / Rational(from_i64(g.cuts(row.stage)));
    Rational tol = row.bound > 0 ? row.bound / 10 : default_tolerance(a, g);
    row.value = correlation(a, b, row.n, tol, g, opts.correlation);
    row.pass = abs(row.value.mid() - ref) <= row.bound + row.value.width();
    return row;
  });
  return rep;
}

/// mu(A ∩ T^{h_j} B) = a · mu(A ∩ B) exactly along half stages.
inline WeakLimitReport weak_limit_scan(const TowerGeometry& g, const CellSet& a, const CellSet& b,
                                       const std::vector<int>& stages,
                                       const Rational& limit = Rational(1, 2),
                                       std::optional<Rational> tol = std::nullopt,
                                       const ScanOptions& opts = {}) {
  detail::require_common(a, b);
  for (int j : stages) detail::require_stage(g, j, a.stage(), StageKind::HalfJPrime);
  const Rational ref = set_intersection(a, b).measure(g);
  const Rational t = tol ? *tol : default_tolerance(a, g);
  WeakLimitReport rep{limit, {}};
  rep.rows = parallel_map<WeakLimitRow>(stages.size(), opts.jobs, [&](std::size_t i) {
    WeakLimitRow row;
    row.stage = stages[i];
    row.n = g.height(row.stage);
    row.target = limit * ref;
    row.value = correlation(a, b, row.n, t, g, opts.correlation);
    row.pass = row.value.contains(row.target);
    return row;
  });
  return rep;
}

/// The same scan on T x T for product sets (A x A2) and (B x B2): the
/// interval is the product of the two factor intervals and the target is
/// a^2 mu(A ∩ B) mu(A2 ∩ B2).
inline WeakLimitReport product_weak_limit_scan(const TowerGeometry& g, const CellSet& a,
                                               const CellSet& b, const CellSet& a2,
                                               const CellSet& b2, const std::vector<int>& stages,
                                               const Rational& limit = Rational(1, 2),
                                               std::optional<Rational> tol = std::nullopt,
                                               const ScanOptions& opts = {}) {
  auto first = weak_limit_scan(g, a, b, stages, limit, tol, opts);
  auto second = weak_limit_scan(g, a2, b2, stages, limit, tol, opts);
  WeakLimitReport rep{limit * limit, {}};
  const Rational ref = set_intersection(a, b).measure(g) * set_intersection(a2, b2).measure(g);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    WeakLimitRow row;
    row.stage = stages[i];
    row.n = first.rows[i].n;
    row.value = first.rows[i].value * second.rows[i].value;
    row.target = rep.a * ref;
    row.pass = row.value.contains(row.target);
    rep.rows.push_back(row);
  }
  return rep;
}

struct SeparationRow {
  int stage = 0;
  MeasureInterval single_ratio;   // mu(A ∩ T^n A) / mu(A)
  MeasureInterval product_ratio;  // the same for A x A under T x T
  bool pass = false;              // ratios at least 1/8 apart
};

/// Finite signature of a·J = a^2·J: along half stages the single-system
/// ratio sits at a while the T x T ratio sits at a^2.
inline std::vector<SeparationRow> separation_scan(const TowerGeometry& g, const CellSet& a,
                                                  const std::vector<int>& stages,
                                                  std::optional<Rational> tol = std::nullopt,
                                                  const ScanOptions& opts = {}) {
  const Rational ma = a.measure(g);
  if (ma == 0) throw ConfigError("separation scan needs a set of positive measure");
  auto single = weak_limit_scan(g, a, a, stages, Rational(1, 2), tol, opts);
  std::vector<SeparationRow> out;
  for (const auto& r : single.rows) {
    SeparationRow row;
    row.stage = r.stage;
    row.single_ratio = r.value.scaled(1 / ma);
    row.product_ratio = row.single_ratio * row.single_ratio;
    row.pass = row.single_ratio.lo - row.product_ratio.hi >= Rational(1, 8);
    out.push_back(row);
  }
  return out;
}

struct RigidityTime {
  int stage;
  Int time;  // (p_1 ... p_n) · h_j
};

/// Times (prod p) · h_j over rigid stages j > after_stage, at which the
/// rational factor returns exactly and the tower part is rigid.
inline std::vector<RigidityTime> product_rigidity_times(const TowerGeometry& g,
                                                        const std::vector<std::int64_t>& primes,
                                                        std::size_t count, std::int64_t group_order,
                                                        int after_stage = 1) {
  const Int P = product_of(primes);
  if (group_order < 1 || P % from_i64(group_order) != 0)
    throw ConfigError("group order " + std::to_string(group_order) +
                      " does not divide the product of the primes");
  std::vector<RigidityTime> out;
  for (int j = after_stage + 1; j < g.depth() && out.size() < count; ++j) {
    if (g.cutting(j).kind != StageKind::RigidJ) continue;
    if (gcd(g.height(j), P) != 1)
      throw ConfigError("h_" + std::to_string(j) + " is not coprime to the primes");
    out.push_back({j, P * g.height(j)});
  }
  if (out.size() < count)
    throw DepthCapError("not enough rigid stages for " + std::to_string(count) + " times",
                        g.depth() + 1);
  return out;
}

/// First rigid stage j > after_stage where the product deviation bound
/// (prod p)(mu(A) + mu(B)) / r_j drops to `threshold` or below.
inline std::optional<RigidityTime> select_rigidity_time(const TowerGeometry& g,
                                                        const std::vector<std::int64_t>& primes,
                                                        const Rational& mass,
                                                        const Rational& threshold,
                                                        int after_stage = 1) {
  const Int P = product_of(primes);
  for (int j = after_stage + 1; j < g.depth(); ++j) {
    if (g.cutting(j).kind != StageKind::RigidJ) continue;
    if (Rational(P) * mass / Rational(from_i64(g.cuts(j))) <= threshold)
      return RigidityTime{j, P * g.height(j)};
  }
  return std::nullopt;
}

struct ProductRigidityRow {
  RigidityTime time;
  MeasureInterval value;
  Rational reference;  // nu(D ∩ E) mu(A ∩ B)
  Rational bound;      // nu(D ∩ E) k (mu(A) + mu(B)) / r_j for time k h_j
  bool pass = false;
};

/// Product correlations of (A x D, B x E) under (T x S)^N at rigidity times.
inline std::vector<ProductRigidityRow> product_rigidity_scan(
    const TowerGeometry& g, const CellSet& a, const GroupSet& d, const CellSet& b,
    const GroupSet& e, const std::vector<std::int64_t>& primes, std::size_t count,
    const ScanOptions& opts = {}) {
  detail::require_common(a, b);
  auto times = product_rigidity_times(g, primes, count, d.order(), a.stage());
  const Rational nu = s_correlation(d, e, 0);
  const Rational ref = nu * set_intersection(a, b).measure(g);
  const Rational mass = a.measure(g) + b.measure(g);
  const Int P = product_of(primes);
  return parallel_map<ProductRigidityRow>(times.size(), opts.jobs, [&](std::size_t i) {
    ProductRigidityRow row;
    row.time = times[i];
    row.reference = ref;
    row.bound = nu * Rational(P) * mass / Rational(from_i64(g.cuts(row.time.stage)));
    Rational tol = row.bound > 0 ? row.bound / 10 : default_tolerance(a, g);
    row.value = product_correlation(a, d, b, e, row.time.time, tol, g, opts.correlation);
    row.pass = abs(row.value.mid() - ref) <= row.bound + row.value.width();
    return row;
  });
}

struct CorrelationRow {
  Int n;
  MeasureInterval value;
};

inline std::vector<CorrelationRow> correlation_export(const TowerGeometry& g, const CellSet& a,
                                                      const CellSet& b,
                                                      const std::vector<Int>& ns,
                                                      const Rational& tol,
                                                      const ScanOptions& opts = {}) {
  return parallel_map<CorrelationRow>(ns.size(), opts.jobs, [&](std::size_t i) {
    return CorrelationRow{ns[i], correlation(a, b, ns[i], tol, g, opts.correlation)};
  });
}

// ---------------------------------------------------------------------------
// CSV: n,lo,hi,reference,bound,pass,approx  (approx = interval midpoint)

struct CsvRow {
  Int n;
  MeasureInterval value;
  std::optional<Rational> reference;
  std::optional<Rational> bound;
  std::optional<bool> pass;
};

inline std::string format_decimal(const Rational& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", q.get_d());
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  os << "n,lo,hi,reference,bound,pass,approx\n";
  for (const auto& r : rows) {
    os << r.n.get_str() << ',' << format_rational(r.value.lo) << ','
       << format_rational(r.value.hi) << ',' << (r.reference ? format_rational(*r.reference) : "")
       << ',' << (r.bound ? format_rational(*r.bound) : "") << ','
       << (r.pass ? (*r.pass ? "true" : "false") : "") << ',' << format_decimal(r.value.mid())
       << '\n';
  }
}

inline std::vector<CsvRow> to_csv_rows(const RigidityReport& rep) {
  std::vector<CsvRow> out;
  for (const auto& r : rep.rows) out.push_back({r.n, r.value, r.reference, r.bound, r.pass});
  return out;
}

inline std::vector<CsvRow> to_csv_rows(const WeakLimitReport& rep) {
  std::vector<CsvRow> out;
  for (const auto& r : rep.rows) out.push_back({r.n, r.value, r.target, Rational(0), r.pass});
  return out;
}

inline std::vector<CsvRow> to_csv_rows(const std::vector<CorrelationRow>& rows,
                                       const Rational& reference) {
  std::vector<CsvRow> out;
  for (const auto& r : rows) out.push_back({r.n, r.value, reference, std::nullopt, std::nullopt});
  return out;
}

}  // namespace rankone
