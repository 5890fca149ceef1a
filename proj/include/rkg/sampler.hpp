#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rkg/model.hpp"

namespace rkg {

/// One realization of G(n, a, K, P). Edges are implicit: nodes x and y are
/// adjacent iff rings[x] and rings[y] intersect.
struct GraphSample {
  std::vector<int> groups;               // 0-based group per node
  std::vector<std::vector<KeyId>> rings; // sorted, distinct ids in [0, P)

  std::size_t size() const { return groups.size(); }
  bool operator==(const GraphSample&) const = default;
};

/// I.i.d. categorical group draws with P[group = i] = a_i.
std::vector<int> assign_groups(const ModelParams& params, Rng& rng);
std::vector<int> assign_groups(const ModelParams& params, const RngSeed& seed);

/// Uniform K-subset of [0, P), sorted. Floyd's algorithm, run on the
/// complement when K > P / 2. Throws std::domain_error unless 0 <= K <= P.
std::vector<KeyId> sample_key_ring(std::int64_t P, std::int64_t K, Rng& rng);
std::vector<KeyId> sample_key_ring(std::int64_t P, std::int64_t K, const RngSeed& seed);

GraphSample sample_graph(const ModelParams& params, Rng& rng);
GraphSample sample_graph(const ModelParams& params, const RngSeed& seed);

/// Draws (super, sub) on one probability space: super ~ G(params_super) and
/// every sub ring is a uniform K_sub-subset of the matching super ring, so
/// sub ~ G(params_sub) and sub is a spanning subgraph of super.
///
/// Throws std::invalid_argument if n, m, a or P differ, or if
/// K_sub[j] > K_super[j] for some j.
std::pair<GraphSample, GraphSample> coupled_sample(const ModelParams& params_super,
                                                   const ModelParams& params_sub,
                                                   const RngSeed& seed);

/// Checks the GraphSample invariants against params (ring sizes, ordering,
/// id range, group range).
bool is_well_formed(const GraphSample& sample, const ModelParams& params);

}  // namespace rkg
