#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rkg/sampler.hpp"

namespace rkg {

struct ComponentSummary {
  std::int64_t num_components = 0;
  std::vector<std::int64_t> component_sizes;  // ascending
  bool is_connected = false;
  std::int64_t J_n = 0;  // isolated nodes
  std::int64_t I_n = 0;  // isolated nodes in group 1
  /// Component label per node; labels are numbered in order of each
  /// component's smallest node id.
  std::vector<std::int64_t> labels;

  bool operator==(const ComponentSummary&) const = default;
};

struct IsolationStats {
  std::int64_t J_n = 0;
  std::int64_t I_n = 0;
  std::vector<std::int64_t> isolated;  // ascending node ids
};

/// Components via a key -> holders index and union-find over every key
/// bucket. Linear in the total number of keys up to the union-find factor.
///
/// A single node is one connected component and also counts as isolated.
ComponentSummary components(const GraphSample& sample);

inline constexpr std::int64_t kNaiveNodeCap = 2000;

/// Reference implementation: all O(n^2) pairwise ring intersections, then
/// BFS. Throws std::length_error when n exceeds `cap`.
ComponentSummary naive_components(const GraphSample& sample, std::int64_t cap = kNaiveNodeCap);

/// True iff two sorted rings share a key (linear merge).
bool edge_exists(std::span<const KeyId> ring_a, std::span<const KeyId> ring_b);

/// A node is isolated iff none of its keys is held by another node.
IsolationStats isolated_nodes(const GraphSample& sample);

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t component_size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace rkg
