// Finite unions of tower levels and exact measure intervals.
#pragma once

#include "rankone/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rankone {

/// Exact bounds lo <= value <= hi on a measure.
struct MeasureInterval {
  Rational lo, hi;

  static MeasureInterval point(const Rational& v) { return {v, v}; }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool intersects(const MeasureInterval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool within(const MeasureInterval& o) const { return o.lo <= lo && hi <= o.hi; }

  MeasureInterval scaled(const Rational& f) const {
    if (f < 0) throw std::invalid_argument("interval scale must be non-negative");
    return {lo * f, hi * f};
  }

  friend bool operator==(const MeasureInterval&, const MeasureInterval&) = default;
};

/// Product of two non-negative intervals.
inline MeasureInterval operator*(const MeasureInterval& a, const MeasureInterval& b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

/// Consecutive levels [lo, hi) of one tower.
struct Cell {
  int stage;
  LevelRange levels;
};

/// Union of level ranges of tower `stage`, kept sorted, disjoint and
/// non-adjacent.
class CellSet {
 public:
  CellSet() = default;
  CellSet(int stage, std::vector<LevelRange> ranges) : stage_(stage), ranges_(std::move(ranges)) {
    canonicalize();
  }

  static CellSet from_cells(const std::vector<Cell>& cells) {
    if (cells.empty()) throw std::invalid_argument("from_cells needs at least one cell");
    std::vector<LevelRange> rs;
    for (const auto& c : cells) {
      if (c.stage != cells.front().stage)
        throw std::invalid_argument("cells from different stages");
      rs.push_back(c.levels);
    }
    return CellSet(cells.front().stage, std::move(rs));
  }

  static CellSet levels(int stage, std::initializer_list<long> ls) {
    std::vector<LevelRange> rs;
    for (long l : ls) rs.push_back({Int(l), Int(l + 1)});
    return CellSet(stage, std::move(rs));
  }

  int stage() const { return stage_; }
  const std::vector<LevelRange>& ranges() const { return ranges_; }
  bool empty() const { return ranges_.empty(); }

  /// Number of levels.
  Int level_count() const {
    Int n = 0;
    for (const auto& r : ranges_) n += r.length();
    return n;
  }

  Rational measure(const TowerGeometry& g) const {
    return Rational(level_count()) * g.width(stage_);
  }

  bool contains(const Int& level) const {
    auto it = std::upper_bound(ranges_.begin(), ranges_.end(), level,
                               [](const Int& v, const LevelRange& r) { return v < r.lo; });
    return it != ranges_.begin() && level < std::prev(it)->hi;
  }

  /// Levels in [0, x).
  Int count_below(const Int& x) const {
    Int n = 0;
    for (const auto& r : ranges_) {
      if (r.lo >= x) break;
      n += (r.hi < x ? r.hi : x) - r.lo;
    }
    return n;
  }

  Int count_in(const LevelRange& w) const {
    return w.empty() ? Int(0) : count_below(w.hi) - count_below(w.lo);
  }

  /// Throws unless all ranges fit in [0, h_stage).
  void check_bounds(const TowerGeometry& g) const {
    if (!ranges_.empty() && (ranges_.front().lo < 0 || ranges_.back().hi > g.height(stage_)))
      throw std::invalid_argument("cell set exceeds tower " + std::to_string(stage_));
  }

  friend bool operator==(const CellSet&, const CellSet&) = default;

 private:
  void canonicalize() {
    std::erase_if(ranges_, [](const LevelRange& r) { return r.empty(); });
    std::sort(ranges_.begin(), ranges_.end(),
              [](const LevelRange& a, const LevelRange& b) { return a.lo < b.lo; });
    std::vector<LevelRange> merged;
    for (auto& r : ranges_) {
      if (!merged.empty() && r.lo <= merged.back().hi) {
        if (r.hi > merged.back().hi) merged.back().hi = r.hi;
      } else {
        merged.push_back(std::move(r));
      }
    }
    ranges_ = std::move(merged);
  }

  int stage_ = 1;
  std::vector<LevelRange> ranges_;
};

inline CellSet set_intersection(const CellSet& a, const CellSet& b) {
  if (a.stage() != b.stage()) throw std::invalid_argument("intersection across stages");
  std::vector<LevelRange> out;
  auto i = a.ranges().begin(), j = b.ranges().begin();
  while (i != a.ranges().end() && j != b.ranges().end()) {
    Int lo = i->lo > j->lo ? i->lo : j->lo;
    Int hi = i->hi < j->hi ? i->hi : j->hi;
    if (lo < hi) out.push_back({lo, hi});
    (i->hi < j->hi) ? ++i : ++j;
  }
  return CellSet(a.stage(), std::move(out));
}

inline CellSet set_union(const CellSet& a, const CellSet& b) {
  if (a.stage() != b.stage()) throw std::invalid_argument("union across stages");
  auto rs = a.ranges();
  rs.insert(rs.end(), b.ranges().begin(), b.ranges().end());
  return CellSet(a.stage(), std::move(rs));
}

/// Complement inside the tower [0, h_stage).
inline CellSet set_complement(const CellSet& a, const TowerGeometry& g) {
  std::vector<LevelRange> out;
  Int cur = 0;
  for (const auto& r : a.ranges()) {
    if (cur < r.lo) out.push_back({cur, r.lo});
    cur = r.hi;
  }
  if (cur < g.height(a.stage())) out.push_back({cur, g.height(a.stage())});
  return CellSet(a.stage(), std::move(out));
}

/// Expresses `cells` at tower `target`: level k of tower j becomes the
/// levels o_j(i) + k of tower j+1, for every column i.
inline CellSet refine(const CellSet& cells, int target, const TowerGeometry& g) {
  if (target < cells.stage())
    throw std::invalid_argument("refine target below the set's stage");
  g.tower(target);  // throws DepthCapError when not derived
  CellSet cur = cells;
  for (int j = cells.stage(); j < target; ++j) {
    std::vector<LevelRange> rs;
    const auto& off = g.offsets(j);
    rs.reserve(off.size() * cur.ranges().size());
    for (const auto& o : off)
      for (const auto& r : cur.ranges()) rs.push_back({o + r.lo, o + r.hi});
    cur = CellSet(j + 1, std::move(rs));
  }
  return cur;
}

/// X_j expressed at tower `target`.
inline CellSet x_region(int j, int target, const TowerGeometry& g) {
  return refine(CellSet(j, {{Int(0), g.height(j)}}), target, g);
}

struct TranslateResult {
  CellSet resolved;
  Rational unresolved_measure;
};

/// Image of `cells` under T^n, resolved at tower `max_stage`. Mass whose
/// orbit leaves the top (n > 0) or bottom (n < 0) of that tower is not
/// guessed; it is reported as unresolved.
inline TranslateResult translate(const CellSet& cells, const Int& n, int max_stage,
                                 const TowerGeometry& g) {
  if (max_stage > g.depth())
    throw DepthCapError("translate needs tower " + std::to_string(max_stage), max_stage);
  const Int& h = g.height(max_stage);
  if (abs(n) >= h) throw std::invalid_argument("|n| must be below the resolving tower height");
  CellSet fine = refine(cells, max_stage, g);
  std::vector<LevelRange> out;
  Int lost = 0;
  for (const auto& r : fine.ranges()) {
    Int lo = r.lo + n, hi = r.hi + n;
    Int clo = lo < 0 ? Int(0) : lo;
    Int chi = hi > h ? h : hi;
    if (clo < chi) {
      out.push_back({clo, chi});
      lost += r.length() - (chi - clo);
    } else {
      lost += r.length();
    }
  }
  return {CellSet(max_stage, std::move(out)), Rational(lost) * g.width(max_stage)};
}

}  // namespace rankone
