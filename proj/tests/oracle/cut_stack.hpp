// Literal cut-and-stack on intervals of the line, for cross-checking.
// Shares no code with the library: positions are boost::rational, towers
// are explicit interval lists, set membership is interval containment.
#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Q = boost::rational<std::int64_t>;

struct ToyStage {
  int cuts;
  std::vector<int> spacers;
};

struct Interval {
  Q a, b;
};

struct PhysTower {
  std::vector<Interval> levels;  // bottom to top
  Q width() const { return levels.front().b - levels.front().a; }
  std::int64_t height() const { return static_cast<std::int64_t>(levels.size()); }
};

/// Towers 1..stages.size()+1, built by slicing every level into equal
/// pieces and piling the columns left to right with fresh spacer intervals.
inline std::vector<PhysTower> build_towers(int h1, Q w1, const std::vector<ToyStage>& stages) {
  std::vector<PhysTower> out(1);
  for (int l = 0; l < h1; ++l) out[0].levels.push_back({w1 * l, w1 * (l + 1)});
  Q free_pos = w1 * h1;
  for (const auto& st : stages) {
    const PhysTower& cur = out.back();
    const Q piece = cur.width() / st.cuts;
    PhysTower next;
    for (int i = 0; i < st.cuts; ++i) {
      for (const auto& lv : cur.levels) next.levels.push_back({lv.a + piece * i, lv.a + piece * (i + 1)});
      for (int s = 0; s < st.spacers[static_cast<std::size_t>(i)]; ++s) {
        next.levels.push_back({free_pos, free_pos + piece});
        free_pos += piece;
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

/// Does `lv` sit inside one of the listed levels of `base`?
inline bool inside(const Interval& lv, const PhysTower& base, const std::set<int>& which) {
  for (int l : which) {
    const auto& b = base.levels[static_cast<std::size_t>(l)];
    if (b.a <= lv.a && lv.b <= b.b) return true;
  }
  return false;
}

struct OracleCorrelation {
  Q cyclic;       // orbit closed top -> bottom
  Q lo, hi;       // honest bounds from non-wrapping pairs and escaping mass
};

/// mu(A ∩ T^n B) at tower `top`, A and B given as level indices of `base`.
inline OracleCorrelation correlate(const PhysTower& top, const PhysTower& base,
                                   const std::set<int>& a, const std::set<int>& b, std::int64_t n) {
  const std::int64_t h = top.height();
  std::vector<char> in_a(static_cast<std::size_t>(h)), in_b(static_cast<std::size_t>(h));
  for (std::int64_t m = 0; m < h; ++m) {
    in_a[static_cast<std::size_t>(m)] = inside(top.levels[static_cast<std::size_t>(m)], base, a);
    in_b[static_cast<std::size_t>(m)] = inside(top.levels[static_cast<std::size_t>(m)], base, b);
  }
  std::int64_t cyc = 0, plain = 0, esc_a = 0, esc_b = 0;
  for (std::int64_t m = 0; m < h; ++m) {
    std::int64_t src = m - n;  // T^n maps level src onto level m
    bool wraps = src < 0 || src >= h;
    std::int64_t s = ((src % h) + h) % h;
    if (in_a[static_cast<std::size_t>(m)] && in_b[static_cast<std::size_t>(s)]) {
      ++cyc;
      if (!wraps) ++plain;
    }
  }
  for (std::int64_t m = 0; m < h; ++m) {
    // A levels whose preimage leaves the tower; B levels whose image does
    std::int64_t src = m - n, dst = m + n;
    if (in_a[static_cast<std::size_t>(m)] && (src < 0 || src >= h)) ++esc_a;
    if (in_b[static_cast<std::size_t>(m)] && (dst < 0 || dst >= h)) ++esc_b;
  }
  const Q w = top.width();
  return {w * cyc, w * plain, w * (plain + std::min(esc_a, esc_b))};
}

}  // namespace oracle
