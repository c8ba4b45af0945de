#pragma once

#include "rankone/rankone.hpp"
#include "oracle/cut_stack.hpp"

#include <set>

namespace testing_support {

using namespace rankone;

/// The two-family schedule with primes 2, 3, 5.
inline const TowerGeometry& generated_geometry() {
  static const TowerGeometry g = derive_geometry(paper_schedule(alternate_rule, {2, 3, 5}, 12));
  return g;
}

inline RankOneSchedule toy_schedule(int h1, const std::vector<oracle::ToyStage>& stages) {
  RankOneSchedule s;
  s.initial_height = h1;
  s.initial_width = 1;
  for (const auto& st : stages) {
    StageParams p;
    p.cuts = st.cuts;
    for (int v : st.spacers) p.spacers.push_back(v);
    s.stages.push_back(p);
  }
  return s;
}

inline CellSet levels_of(int stage, const std::set<int>& ls) {
  std::vector<LevelRange> rs;
  for (int l : ls) rs.push_back({Int(l), Int(l + 1)});
  return CellSet(stage, rs);
}

inline Rational to_rational(const oracle::Q& q) {
  return Rational(from_i64(q.numerator()), from_i64(q.denominator()));
}

/// All subsets of {0..n-1}.
inline std::vector<std::set<int>> subsets(int n) {
  std::vector<std::set<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::set<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.insert(i);
    out.push_back(s);
  }
  return out;
}

}  // namespace testing_support
