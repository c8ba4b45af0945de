// Tower geometry derived from a schedule: heights, widths, column offsets.
#pragma once

#include "rankone/errors.hpp"
#include "rankone/rational.hpp"
#include "rankone/schedule.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace rankone {

/// Half-open interval [lo, hi) of tower levels.
struct LevelRange {
  Int lo, hi;
  Int length() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

/// Where a level of tower j+1 sits relative to the columns cut from tower j.
struct ColumnHit {
  std::size_t column;  // 0-based column index
  Int within;          // level minus column offset
  bool in_body;        // within < h_j (otherwise a spacer level)
};

/// Geometry of towers 1..depth(). Stage numbers are 1-based as in the
/// construction: tower j has height h_j, base width w_j, and is cut by the
/// j-th stage parameters into the columns that form tower j+1.
class TowerGeometry {
 public:
  struct Tower {
    Int height;
    Rational width;
    Rational measure;
  };
  struct Cutting {
    std::int64_t cuts;
    StageKind kind;
    std::vector<Int> spacers;
    std::vector<Int> offsets;  // offsets[i] = o_j(i+1)
  };

  TowerGeometry(const Int& h1, const Rational& w1) {
    if (h1 < 1) throw ConfigError("initial height must be >= 1");
    if (w1 <= 0) throw ConfigError("initial width must be > 0");
    towers_.push_back({h1, w1, Rational(h1) * w1});
  }

  int depth() const { return static_cast<int>(towers_.size()); }

  const Tower& tower(int j) const { return towers_.at(index(j)); }
  const Int& height(int j) const { return tower(j).height; }
  const Rational& width(int j) const { return tower(j).width; }
  const Rational& measure(int j) const { return tower(j).measure; }

  /// Cutting of tower j into tower j+1; requires j < depth().
  const Cutting& cutting(int j) const {
    if (j < 1 || j >= depth())
      throw DepthCapError("no cutting data for stage " + std::to_string(j), j + 1);
    return cuttings_[static_cast<std::size_t>(j - 1)];
  }
  std::int64_t cuts(int j) const { return cutting(j).cuts; }
  const std::vector<Int>& offsets(int j) const { return cutting(j).offsets; }

  /// Spacer levels of tower j+1 added on top of each column of tower j.
  std::vector<LevelRange> spacer_ranges(int j) const {
    const auto& c = cutting(j);
    std::vector<LevelRange> out;
    for (std::size_t i = 0; i < c.offsets.size(); ++i) {
      Int lo = c.offsets[i] + height(j);
      if (c.spacers[i] > 0) out.push_back({lo, lo + c.spacers[i]});
    }
    return out;
  }

  /// Appends tower depth()+1. HalfJPrime placeholders are filled from h_j.
  void extend(const StageParams& p) {
    const int j = depth();
    if (p.cuts < 1) throw ConfigError("stage " + std::to_string(j) + ": cuts must be positive");
    const Int& h = height(j);
    Cutting c{p.cuts, p.kind, p.spacers, {}};
    const auto r = static_cast<std::size_t>(p.cuts);
    if (c.spacers.empty() && p.kind == StageKind::HalfJPrime) {
      if (p.cuts % 2 != 0) throw ConfigError("HALF_JPRIME stage needs an even number of cuts");
      c.spacers.assign(r, Int(0));
      for (std::size_t i = r / 2; i < r; ++i) c.spacers[i] = h;
    }
    if (c.spacers.size() != r)
      throw ConfigError("stage " + std::to_string(j) + ": spacers length differs from cuts");
    for (const auto& s : c.spacers)
      if (s < 0) throw ConfigError("stage " + std::to_string(j) + ": negative spacer");
    validate_kind(j, c, h);

    c.offsets.resize(r);
    Int next = 0;
    for (std::size_t i = 0; i < r; ++i) {
      c.offsets[i] = next;
      next += h + c.spacers[i];
    }
    Rational w = width(j) / Rational(from_i64(p.cuts));
    cuttings_.push_back(std::move(c));
    towers_.push_back({next, w, Rational(next) * w});
  }

  /// Locates a level of tower j+1 among the columns of tower j.
  ColumnHit locate(int j, const Int& level) const {
    const auto& off = offsets(j);
    auto it = std::upper_bound(off.begin(), off.end(), level);
    std::size_t c = it == off.begin() ? 0 : static_cast<std::size_t>(it - off.begin() - 1);
    Int within = level - off[c];
    return {c, within, within < height(j)};
  }

  /// Level of tower `to` containing the given level of tower `from`
  /// (from >= to), or nullopt when it is a spacer outside X_to.
  std::optional<Int> descend(int from, Int level, int to) const {
    for (int k = from; k > to; --k) {
      auto hit = locate(k - 1, level);
      if (!hit.in_body) return std::nullopt;
      level = hit.within;
    }
    return level;
  }

 private:
  std::size_t index(int j) const {
    if (j < 1 || j > depth())
      throw DepthCapError("stage " + std::to_string(j) + " is not derived (depth " +
                              std::to_string(depth()) + ")",
                          j);
    return static_cast<std::size_t>(j - 1);
  }

  static void validate_kind(int j, const Cutting& c, const Int& h) {
    const auto r = c.spacers.size();
    if (c.kind == StageKind::RigidJ) {
      for (std::size_t i = 0; i + 1 < r; ++i)
        if (c.spacers[i] != 0)
          throw ConfigError("stage " + std::to_string(j) +
                            ": RIGID_J allows a spacer only on the last column");
    } else if (c.kind == StageKind::HalfJPrime) {
      if (r % 2 != 0) throw ConfigError("HALF_JPRIME stage needs an even number of cuts");
      for (std::size_t i = 0; i < r; ++i) {
        bool ok = i < r / 2 ? c.spacers[i] == 0
                            : (i + 1 < r ? c.spacers[i] == h : c.spacers[i] >= h);
        if (!ok)
          throw ConfigError("stage " + std::to_string(j) +
                            ": HALF_JPRIME spacers must be 0 then h_j on the upper half");
      }
    }
  }

  std::vector<Tower> towers_;
  std::vector<Cutting> cuttings_;
};

/// Geometry of towers 1..up_to.
inline TowerGeometry derive_geometry(const RankOneSchedule& s, int up_to) {
  if (up_to < 1 || up_to > s.tower_count())
    throw DepthCapError("schedule defines towers 1.." + std::to_string(s.tower_count()) +
                            ", requested " + std::to_string(up_to),
                        up_to);
  TowerGeometry g(s.initial_height, s.initial_width);
  for (int j = 1; j < up_to; ++j) g.extend(s.stages[static_cast<std::size_t>(j - 1)]);
  return g;
}

/// Geometry of every tower the schedule defines.
inline TowerGeometry derive_geometry(const RankOneSchedule& s) {
  return derive_geometry(s, s.tower_count());
}

}  // namespace rankone
