#include "rkg/sampler.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace rkg {

std::vector<int> assign_groups(const ModelParams& params, Rng& rng) {
  require_valid(params);
  std::vector<double> cumulative(params.a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < params.a.size(); ++i) cumulative[i] = (acc += params.a[i]);

  std::vector<int> groups(static_cast<std::size_t>(params.n));
  const int last = params.m - 1;
  for (auto& g : groups) {
    if (last == 0) {
      g = 0;
      continue;
    }
    const double u = rng.unit() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    g = std::min(static_cast<int>(it - cumulative.begin()), last);
  }
  return groups;
}

std::vector<int> assign_groups(const ModelParams& params, const RngSeed& seed) {
  Rng rng(seed);
  return assign_groups(params, rng);
}

namespace {

// Floyd: for j in [P - K, P), draw t in [0, j]; take t unless already taken,
// in which case take j.
std::vector<KeyId> floyd_subset(std::int64_t P, std::int64_t K, Rng& rng) {
  std::unordered_set<KeyId> chosen;
  chosen.reserve(static_cast<std::size_t>(K) * 2);
  std::vector<KeyId> out;
  out.reserve(static_cast<std::size_t>(K));
  for (std::int64_t j = P - K; j < P; ++j) {
    const auto t = static_cast<KeyId>(rng.below(static_cast<std::uint64_t>(j) + 1));
    const KeyId pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<KeyId> sample_key_ring(std::int64_t P, std::int64_t K, Rng& rng) {
  if (K < 0 || P < 0 || K > P)
    throw std::domain_error("sample_key_ring: need 0 <= K <= P (K=" + std::to_string(K) +
                            ", P=" + std::to_string(P) + ")");
  if (2 * K <= P) return floyd_subset(P, K, rng);

  const auto excluded = floyd_subset(P, P - K, rng);
  std::vector<KeyId> out;
  out.reserve(static_cast<std::size_t>(K));
  auto ex = excluded.begin();
  for (KeyId id = 0; id < P; ++id) {
    if (ex != excluded.end() && *ex == id) {
      ++ex;
      continue;
    }
    out.push_back(id);
  }
  return out;
}

std::vector<KeyId> sample_key_ring(std::int64_t P, std::int64_t K, const RngSeed& seed) {
  Rng rng(seed);
  return sample_key_ring(P, K, rng);
}

GraphSample sample_graph(const ModelParams& params, Rng& rng) {
  GraphSample s;
  s.groups = assign_groups(params, rng);
  s.rings.reserve(s.groups.size());
  for (int g : s.groups) s.rings.push_back(sample_key_ring(params.P, params.K[g], rng));
  return s;
}

GraphSample sample_graph(const ModelParams& params, const RngSeed& seed) {
  Rng rng(seed);
  return sample_graph(params, rng);
}

std::pair<GraphSample, GraphSample> coupled_sample(const ModelParams& params_super,
                                                   const ModelParams& params_sub,
                                                   const RngSeed& seed) {
  require_valid(params_super);
  require_valid(params_sub);
  if (params_super.n != params_sub.n || params_super.m != params_sub.m ||
      params_super.P != params_sub.P || params_super.a != params_sub.a)
    throw std::invalid_argument("coupled_sample: n, m, a and P must match");
  for (int j = 0; j < params_super.m; ++j) {
    if (params_sub.K[j] > params_super.K[j])
      throw std::invalid_argument("coupled_sample: K_sub exceeds K_super at group " +
                                  std::to_string(j + 1));
  }

  Rng rng(seed);
  GraphSample super = sample_graph(params_super, rng);
  GraphSample sub;
  sub.groups = super.groups;
  sub.rings.reserve(super.rings.size());
  for (std::size_t x = 0; x < super.size(); ++x) {
    const auto& ring = super.rings[x];
    const auto positions = sample_key_ring(static_cast<std::int64_t>(ring.size()),
                                           params_sub.K[super.groups[x]], rng);
    std::vector<KeyId> picked;
    picked.reserve(positions.size());
    for (auto pos : positions) picked.push_back(ring[static_cast<std::size_t>(pos)]);
    sub.rings.push_back(std::move(picked));
  }
  return {std::move(super), std::move(sub)};
}

bool is_well_formed(const GraphSample& sample, const ModelParams& params) {
  if (sample.groups.size() != sample.rings.size()) return false;
  if (static_cast<std::int64_t>(sample.size()) != params.n) return false;
  for (std::size_t x = 0; x < sample.size(); ++x) {
    const int g = sample.groups[x];
    if (g < 0 || g >= params.m) return false;
    const auto& ring = sample.rings[x];
    if (static_cast<std::int64_t>(ring.size()) != params.K[g]) return false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (ring[i] < 0 || ring[i] >= params.P) return false;
      if (i > 0 && ring[i] <= ring[i - 1]) return false;
    }
  }
  return true;
}

}  // namespace rkg
