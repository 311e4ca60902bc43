#include "oddic/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "oddic/errors.hpp"
#include "oddic/random.hpp"

namespace oddic {

Digraph::Digraph(std::vector<std::vector<NodeId>> in_neighbors)
    : in_neighbors_(std::move(in_neighbors)) {
  const std::size_t n = in_neighbors_.size();
  std::vector<char> seen(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (NodeId j : in_neighbors_[i]) {
      if (j >= n) {
        throw ParameterError("node " + std::to_string(i) + ": in-neighbour " + std::to_string(j) +
                             " out of range [0, " + std::to_string(n) + ")");
      }
      if (j == i) {
        throw ParameterError("node " + std::to_string(i) + ": self-loop");
      }
      if (seen[j]) {
        throw ParameterError("node " + std::to_string(i) + ": duplicate in-neighbour " +
                             std::to_string(j));
      }
      seen[j] = 1;
    }
  }
}

Digraph Digraph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::vector<NodeId>> lists(n);
  for (const auto& [from, to] : edges) {
    if (to >= n) {
      throw ParameterError("edge target " + std::to_string(to) + " out of range");
    }
    lists[to].push_back(from);
  }
  return Digraph(std::move(lists));
}

Digraph Digraph::complete(std::size_t n) {
  std::vector<std::vector<NodeId>> lists(n);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (j != i) lists[i].push_back(j);
    }
  }
  return Digraph(std::move(lists));
}

std::span<const NodeId> Digraph::in_neighbors(NodeId i) const {
  if (i >= size()) {
    throw ParameterError("node " + std::to_string(i) + " out of range");
  }
  return in_neighbors_[i];
}

bool Digraph::has_edge(NodeId from, NodeId to) const {
  const auto in = in_neighbors(to);
  return std::find(in.begin(), in.end(), from) != in.end();
}

std::vector<std::uint64_t> Digraph::in_neighbor_masks() const {
  if (size() > 64) {
    throw ParameterError("bitmask view needs at most 64 nodes");
  }
  std::vector<std::uint64_t> masks(size(), 0);
  for (NodeId i = 0; i < size(); ++i) {
    for (NodeId j : in_neighbors_[i]) masks[i] |= std::uint64_t{1} << j;
  }
  return masks;
}

Digraph Digraph::relabeled(std::span<const NodeId> perm) const {
  if (perm.size() != size()) {
    throw ParameterError("permutation size mismatch");
  }
  std::vector<std::vector<NodeId>> lists(size());
  for (NodeId i = 0; i < size(); ++i) {
    auto& dst = lists.at(perm[i]);
    for (NodeId j : in_neighbors_[i]) dst.push_back(perm[j]);
  }
  return Digraph(std::move(lists));
}

Digraph generate_random_digraph(std::size_t n, std::size_t in_degree, RandomStream& rng) {
  if (n < 2 || in_degree < 1 || in_degree > n - 1) {
    throw ParameterError("in_degree " + std::to_string(in_degree) + " outside [1, " +
                         std::to_string(n == 0 ? 0 : n - 1) + "] for n = " + std::to_string(n));
  }
  std::vector<std::vector<NodeId>> lists(n);
  std::vector<NodeId> pool(n - 1);
  for (NodeId i = 0; i < n; ++i) {
    // Pool of all other nodes, then a partial Fisher-Yates shuffle.
    std::iota(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(i), NodeId{0});
    std::iota(pool.begin() + static_cast<std::ptrdiff_t>(i), pool.end(), i + 1);
    for (std::size_t k = 0; k < in_degree; ++k) {
      const auto pick = k + rng.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
    }
    lists[i].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(in_degree));
  }
  return Digraph(std::move(lists));
}

}  // namespace oddic
