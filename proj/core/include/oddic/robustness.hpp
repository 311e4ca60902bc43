#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "oddic/digraph.hpp"

namespace oddic {

inline constexpr std::size_t kDefaultExhaustiveLimit = 16;

/// Pair of disjoint node subsets, as bitmasks over node indices.
struct SubsetPair {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

/// Brute-force (r, s)-robustness test.
///
/// A digraph is (r, s)-robust when, for every pair of nonempty disjoint
/// subsets S1, S2, at least one holds:
///   - every node of S1 has >= r in-neighbours outside S1;
///   - every node of S2 has >= r in-neighbours outside S2;
///   - at least s nodes of S1 u S2 have >= r in-neighbours outside their own set.
///
/// Enumerates all ~3^n subset pairs. Throws InfeasibleCheckError when
/// g.size() > node_limit, ParameterError when r < 1 or s < 1.
bool check_rs_robustness(const Digraph& g, int r, int s,
                         std::size_t node_limit = kDefaultExhaustiveLimit);

/// First subset pair (in enumeration order) for which none of the three
/// conditions hold, or nullopt when the graph is (r, s)-robust.
std::optional<SubsetPair> find_robustness_violation(const Digraph& g, int r, int s,
                                                    std::size_t node_limit = kDefaultExhaustiveLimit);

}  // namespace oddic
