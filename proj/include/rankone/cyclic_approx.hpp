// Cyclic approximation of a tower stage: the top level wraps to the bottom.
//
// Cells are labelled (g, z, l): g in Z_m for an optional cyclic factor, z in
// Z_p for an optional skew fiber, l the tower level. One step shifts g by +1
// and applies the skew rule to (z, l). This is the zero-spacer idealisation
// of the stage; it says nothing about measure.
#pragma once

#include "rankone/geometry.hpp"
#include "rankone/permutation.hpp"
#include "rankone/product.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>

namespace rankone {

struct ApproxSystem {
  Int height;                          // h_j of the approximated stage
  std::optional<CyclicFactor> factor;  // S on Z_m
  std::optional<SkewSystem> skew;      // F(T,p)
  bool exact_stage = true;             // false when the stage has spacers

  std::int64_t group_order() const { return factor ? factor->order : 1; }
  std::int64_t fibers() const { return skew ? skew->p : 1; }
  Int size() const { return height * from_i64(group_order()) * from_i64(fibers()); }
};

inline ApproxSystem approx_of_stage(const TowerGeometry& g, int stage,
                                    std::optional<CyclicFactor> factor = std::nullopt,
                                    std::optional<SkewSystem> skew = std::nullopt) {
  ApproxSystem s{g.height(stage), factor, skew, true};
  if (stage < g.depth())
    for (const auto& sp : g.cutting(stage).spacers)
      if (sp != 0) s.exact_stage = false;
  return s;
}

inline std::size_t approx_index(const ApproxSystem& s, std::int64_t grp, std::int64_t z,
                                std::uint64_t level) {
  const auto h = to_u64(s.height);
  return static_cast<std::size_t>((static_cast<std::uint64_t>(grp) * s.fibers() + z) * h + level);
}

/// Explicit permutation; refuses systems above `max_size` cells.
inline FinitePermutation cyclic_approximation(const ApproxSystem& s,
                                              std::uint64_t max_size = 50'000'000) {
  if (s.height < 1) throw std::invalid_argument("height must be >= 1");
  if (s.group_order() < 1) throw std::invalid_argument("group order must be >= 1");
  if (s.skew && s.skew->p < 2) throw std::invalid_argument("skew order must be > 1");
  if (s.size() > from_u64(max_size))
    throw ResourceCapError("cyclic approximation of " + s.size().get_str() + " cells exceeds cap");
  const std::uint64_t h = to_u64(s.height);
  const std::int64_t m = s.group_order(), p = s.fibers();
  std::vector<FinitePermutation::index_type> img(to_u64(s.size()));
  for (std::int64_t grp = 0; grp < m; ++grp)
    for (std::int64_t z = 0; z < p; ++z)
      for (std::uint64_t l = 0; l < h; ++l) {
        std::int64_t z2 = z;
        std::uint64_t l2 = l;
        if (s.skew) {
          z2 = (z + 1) % p;
          if (z == 0) l2 = (l + 1) % h;
        } else {
          l2 = (l + 1) % h;
        }
        img[approx_index(s, grp, z, l)] =
            static_cast<FinitePermutation::index_type>(approx_index(s, (grp + 1) % m, z2, l2));
      }
  return FinitePermutation(std::move(img));
}

/// Cycle count of the k-th power without building the permutation.
/// The tower part (with or without skew) is one cycle of length L = h or
/// p h; the product with an m-cycle gives gcd(m, L) cycles of length
/// lcm(m, L), each of which splits into gcd(lcm, k) under the k-th power.
inline Int approximation_components(const ApproxSystem& s, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("power must be >= 1");
  const Int L = s.height * from_i64(s.fibers());
  const Int m = from_i64(s.group_order());
  const Int g = gcd(m, L);
  const Int lcm = m / g * L;
  return g * gcd(lcm, from_u64(k));
}

}  // namespace rankone
