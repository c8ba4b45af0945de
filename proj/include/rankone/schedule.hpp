// Cutting-and-stacking schedules and the two-family stage generator.
#pragma once

#include "rankone/errors.hpp"
#include "rankone/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rankone {

enum class StageKind { RigidJ, HalfJPrime, Custom };

inline std::string to_string(StageKind k) {
  switch (k) {
    case StageKind::RigidJ: return "RIGID_J";
    case StageKind::HalfJPrime: return "HALF_JPRIME";
    case StageKind::Custom: return "CUSTOM";
  }
  return "CUSTOM";
}

inline StageKind stage_kind_from_string(const std::string& s) {
  if (s == "RIGID_J") return StageKind::RigidJ;
  if (s == "HALF_JPRIME") return StageKind::HalfJPrime;
  if (s == "CUSTOM") return StageKind::Custom;
  throw ConfigError("unknown stage kind: " + s);
}

/// Parameters of one cutting step: the stage tower is cut into `cuts`
/// columns and `spacers[i]` new levels are put on top of column i.
///
/// A HalfJPrime stage may leave `spacers` empty; the half pattern
/// (zeros, then h_j on the upper half of the columns) is filled in when
/// the geometry is derived and h_j is known.
struct StageParams {
  std::int64_t cuts = 1;
  std::vector<Int> spacers;
  StageKind kind = StageKind::Custom;

  static StageParams zero_spacers(std::int64_t cuts, StageKind kind = StageKind::Custom) {
    return {cuts, std::vector<Int>(static_cast<std::size_t>(cuts), Int(0)), kind};
  }
};

struct RankOneSchedule {
  Int initial_height = 1;
  Rational initial_width = 1;
  std::vector<StageParams> stages;

  /// Number of towers the schedule defines (stages + 1).
  int tower_count() const { return static_cast<int>(stages.size()) + 1; }
};

/// Smallest t >= 0 with gcd(base + t, modulus) == 1. Always below modulus.
inline Int coprime_tuning(const Int& base, const Int& modulus) {
  if (modulus <= 1) return 0;
  Int t = 0;
  while (gcd(base + t, modulus) != 1) ++t;
  return t;
}

inline Int product_of(const std::vector<std::int64_t>& primes) {
  Int p = 1;
  for (auto q : primes) p *= from_i64(q);
  return p;
}

struct GeneratorOptions {
  Int initial_height = 1;
  Rational initial_width = 1;
  /// Cuts of the first rigid stage; each later rigid stage doubles it.
  std::int64_t rigid_base_cuts = 8;
  /// Refuse to materialise stages with more columns than this.
  std::int64_t max_cuts = std::int64_t{1} << 20;
};

/// Predicate selecting the rigid family: true for stage j in J.
using StagePredicate = std::function<bool(int)>;

/// Even stages rigid, odd stages carry the half-spacer pattern.
inline bool alternate_rule(int j) { return j % 2 == 0; }

/// Builds the two-family schedule.
///
/// Rigid stages (j in J) use zero spacers with cuts 8, 16, 32, ...
/// Half stages (j not in J) use 2j cuts, no spacers on the first j columns
/// and h_j spacer levels on each of the last j columns.
///
/// Every rigid stage height h_j must be coprime to the product of `primes`.
/// The stage preceding a rigid stage absorbs the fix: its last-column spacer
/// grows by the smallest t making h_{j} coprime. On a half stage this keeps
/// the exact one-half return (the last column's spacer only gets taller).
inline RankOneSchedule paper_schedule(const StagePredicate& in_j,
                                      const std::vector<std::int64_t>& primes, int depth,
                                      const GeneratorOptions& opts = {}) {
  if (depth < 1) throw ConfigError("generator depth must be >= 1");
  if (opts.initial_height < 1) throw ConfigError("initial_height must be >= 1");
  if (opts.initial_width <= 0) throw ConfigError("initial_width must be > 0");
  for (auto p : primes)
    if (p < 2) throw ConfigError("primes must be >= 2");

  bool saw_j = false, saw_jprime = false;
  for (int j = 1; j <= depth; ++j) (in_j(j) ? saw_j : saw_jprime) = true;
  if (!saw_j || !saw_jprime)
    throw ConfigError("stage rule must produce both rigid and half stages within depth");

  const Int modulus = product_of(primes);
  if (in_j(1) && gcd(opts.initial_height, modulus) != 1)
    throw ConfigError("stage 1 is rigid but initial_height is not coprime to the primes");

  RankOneSchedule s;
  s.initial_height = opts.initial_height;
  s.initial_width = opts.initial_width;

  Int h = opts.initial_height;
  std::int64_t rigid_cuts = opts.rigid_base_cuts;
  for (int j = 1; j <= depth; ++j) {
    StageParams st;
    if (in_j(j)) {
      if (rigid_cuts > opts.max_cuts) throw ConfigError("rigid cuts exceed max_cuts; lower depth");
      st = StageParams::zero_spacers(rigid_cuts, StageKind::RigidJ);
      rigid_cuts *= 2;
    } else {
      st.kind = StageKind::HalfJPrime;
      st.cuts = 2 * static_cast<std::int64_t>(j);
      st.spacers.assign(static_cast<std::size_t>(st.cuts), Int(0));
      for (std::int64_t i = j; i < st.cuts; ++i) st.spacers[static_cast<std::size_t>(i)] = h;
    }
    Int next = h * from_i64(st.cuts);
    for (const auto& sp : st.spacers) next += sp;
    if (!primes.empty() && in_j(j + 1)) {
      Int t = coprime_tuning(next, modulus);
      st.spacers.back() += t;
      next += t;
    }
    s.stages.push_back(std::move(st));
    h = next;
  }
  return s;
}

}  // namespace rankone
