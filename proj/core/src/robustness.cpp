#include "oddic/robustness.hpp"

#include <bit>
#include <string>
#include <vector>

#include "oddic/errors.hpp"

namespace oddic {

std::optional<SubsetPair> find_robustness_violation(const Digraph& g, int r, int s,
                                                    std::size_t node_limit) {
  if (r < 1 || s < 1) {
    throw ParameterError("robustness parameters must satisfy r >= 1 and s >= 1");
  }
  const std::size_t n = g.size();
  if (n > node_limit || n > 24) {
    throw InfeasibleCheckError("exhaustive check infeasible: " + std::to_string(n) +
                               " nodes exceeds the limit of " + std::to_string(node_limit));
  }
  if (n < 2) {
    return std::nullopt;  // no pair of nonempty disjoint subsets exists
  }

  const auto in_masks = g.in_neighbor_masks();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;

  // reachable[S] = nodes of S with at least r in-neighbours outside S.
  std::vector<std::uint32_t> reachable(std::size_t{1} << n, 0);
  for (std::uint64_t set = 1; set <= full; ++set) {
    std::uint32_t x = 0;
    for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      if (std::popcount(in_masks[i] & ~set) >= r) x |= std::uint32_t{1} << i;
    }
    reachable[set] = x;
  }

  for (std::uint64_t s1 = 1; s1 <= full; ++s1) {
    const std::uint32_t x1 = reachable[s1];
    if (x1 == s1) continue;  // condition (a) holds for every partner
    const int c1 = std::popcount(x1);
    const std::uint64_t complement = full & ~s1;
    // Nonempty submasks of the complement.
    for (std::uint64_t s2 = complement; s2 != 0; s2 = (s2 - 1) & complement) {
      const std::uint32_t x2 = reachable[s2];
      if (x2 == s2) continue;
      if (c1 + std::popcount(x2) >= s) continue;
      return SubsetPair{s1, s2};
    }
  }
  return std::nullopt;
}

bool check_rs_robustness(const Digraph& g, int r, int s, std::size_t node_limit) {
  return !find_robustness_violation(g, r, s, node_limit).has_value();
}

}  // namespace oddic
