#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace oddic {

class RandomStream;

using NodeId = std::size_t;

/// Static directed network stored as in-neighbour lists.
///
/// in_neighbors(i) holds every j with an edge (j, i): the nodes whose state i
/// receives. Self-loops and duplicate entries are rejected at construction;
/// a node's own value is added by the consensus step, not by the graph.
class Digraph {
 public:
  Digraph() = default;

  /// Validates and takes ownership of the lists. Throws ParameterError on a
  /// self-loop, duplicate entry, or out-of-range index.
  explicit Digraph(std::vector<std::vector<NodeId>> in_neighbors);

  /// Build from an edge list of (source, target) pairs.
  static Digraph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  /// Every ordered pair (j, i) with j != i.
  static Digraph complete(std::size_t n);

  std::size_t size() const { return in_neighbors_.size(); }

  std::span<const NodeId> in_neighbors(NodeId i) const;

  bool has_edge(NodeId from, NodeId to) const;

  const std::vector<std::vector<NodeId>>& adjacency() const { return in_neighbors_; }

  /// Bitmask of in-neighbours per node; requires size() <= 64.
  std::vector<std::uint64_t> in_neighbor_masks() const;

  /// Same graph under the relabelling old node i -> perm[i].
  Digraph relabeled(std::span<const NodeId> perm) const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::vector<std::vector<NodeId>> in_neighbors_;
};

/// Random digraph where each node draws exactly `in_degree` distinct
/// in-neighbours uniformly without replacement from the other n - 1 nodes.
/// Throws ParameterError unless 1 <= in_degree <= n - 1.
Digraph generate_random_digraph(std::size_t n, std::size_t in_degree, RandomStream& rng);

}  // namespace oddic
