// Finite permutations: cycle structure, powers and k-th roots.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rankone {

class FinitePermutation {
 public:
  using index_type = std::uint32_t;

  FinitePermutation() = default;

  /// One-line image form: element i maps to images[i].
  explicit FinitePermutation(std::vector<index_type> images) : map_(std::move(images)) {
    std::vector<bool> seen(map_.size(), false);
    for (auto v : map_) {
      if (v >= map_.size() || seen[v]) throw std::invalid_argument("not a bijection");
      seen[v] = true;
    }
  }

  static FinitePermutation identity(std::size_t n) {
    std::vector<index_type> m(n);
    std::iota(m.begin(), m.end(), index_type{0});
    return FinitePermutation(std::move(m));
  }

  /// The cycle 0 -> 1 -> ... -> n-1 -> 0.
  static FinitePermutation cycle(std::size_t n) {
    std::vector<index_type> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<index_type>((i + 1) % n);
    return FinitePermutation(std::move(m));
  }

  std::size_t size() const { return map_.size(); }
  index_type operator()(index_type i) const { return map_[i]; }
  const std::vector<index_type>& images() const { return map_; }

  /// (this ∘ other)(i) = this(other(i)).
  FinitePermutation compose(const FinitePermutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("size mismatch");
    std::vector<index_type> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = map_[other.map_[i]];
    return FinitePermutation(std::move(m));
  }

  /// Cycles, each starting at its smallest element, ordered by that element.
  std::vector<std::vector<index_type>> cycles() const {
    std::vector<std::vector<index_type>> out;
    std::vector<bool> seen(size(), false);
    for (std::size_t s = 0; s < size(); ++s) {
      if (seen[s]) continue;
      std::vector<index_type> c;
      for (auto i = static_cast<index_type>(s); !seen[i]; i = map_[i]) {
        seen[i] = true;
        c.push_back(i);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<std::size_t> cycle_lengths() const {
    std::vector<std::size_t> out;
    for (const auto& c : cycles()) out.push_back(c.size());
    return out;
  }

  /// perm^k for k >= 0, computed cycle by cycle.
  FinitePermutation power(std::uint64_t k) const {
    std::vector<index_type> m(size());
    for (const auto& c : cycles()) {
      const std::size_t len = c.size();
      const std::size_t step = static_cast<std::size_t>(k % len);
      for (std::size_t t = 0; t < len; ++t) m[c[t]] = c[(t + step) % len];
    }
    return FinitePermutation(std::move(m));
  }

  friend bool operator==(const FinitePermutation&, const FinitePermutation&) = default;

 private:
  std::vector<index_type> map_;
};

/// Cycles of perm^k: each L-cycle of perm splits into gcd(L, k) cycles.
inline std::uint64_t count_ergodic_components(const FinitePermutation& perm, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("power must be >= 1");
  std::uint64_t n = 0;
  for (auto len : perm.cycle_lengths()) n += std::gcd<std::uint64_t, std::uint64_t>(len, k);
  return n;
}

struct RootResult {
  bool exists = false;
  std::optional<FinitePermutation> witness;
};

/// Decides whether some sigma satisfies sigma^k == perm and builds one.
///
/// An M-cycle of sigma becomes g = gcd(M, k) cycles of length M/g under the
/// k-th power. So the L-cycles of perm must be grouped into bundles of g
/// cycles where g | k and gcd(L g, k) == g; every bundle is then interleaved
/// into a single (L g)-cycle of the root.
inline RootResult root_exists(const FinitePermutation& perm, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("root degree must be >= 1");
  std::map<std::size_t, std::vector<std::vector<FinitePermutation::index_type>>> by_len;
  for (auto& c : perm.cycles()) by_len[c.size()].push_back(std::move(c));

  std::vector<FinitePermutation::index_type> root(perm.size());
  for (auto& [len, cycs] : by_len) {
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t g = 1; g <= k; ++g)
      if (k % g == 0 && std::gcd<std::uint64_t, std::uint64_t>(len * g, k) == g)
        sizes.push_back(g);

    // Unbounded subset-sum on the cycle count, remembering one decomposition.
    const std::size_t count = cycs.size();
    std::vector<std::uint64_t> pick(count + 1, 0);
    std::vector<bool> ok(count + 1, false);
    ok[0] = true;
    for (std::size_t t = 1; t <= count; ++t)
      for (auto g : sizes)
        if (g <= t && ok[t - g]) {
          ok[t] = true;
          pick[t] = g;
          break;
        }
    if (!ok[count]) return {};

    std::size_t next = 0;
    for (std::size_t t = count; t > 0; t -= pick[t]) {
      const std::uint64_t g = pick[t];
      const std::uint64_t m = len * g;
      std::vector<FinitePermutation::index_type> big(m);
      for (std::uint64_t r = 0; r < g; ++r)
        for (std::uint64_t i = 0; i < len; ++i) big[(r + i * k) % m] = cycs[next + r][i];
      for (std::uint64_t x = 0; x < m; ++x) root[big[x]] = big[(x + 1) % m];
      next += g;
    }
  }
  return {true, FinitePermutation(std::move(root))};
}

}  // namespace rankone
