#include "rkg/graphalgo.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace rkg {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

namespace {

// Holder count per key, saturated at 2, and one union per repeated holder.
// A dense table is used when the pool is not much larger than the number of
// keys in play; otherwise (key, node) pairs are sorted into buckets.
struct KeyIndex {
  std::vector<std::uint8_t> shared_flag;  // per node: holds at least one shared key

  KeyIndex(const GraphSample& sample, UnionFind* uf) {
    const std::size_t n = sample.size();
    shared_flag.assign(n, 0);
    std::size_t total = 0;
    KeyId max_key = -1;
    for (const auto& ring : sample.rings) {
      total += ring.size();
      if (!ring.empty()) max_key = std::max(max_key, ring.back());
    }
    const auto pool = static_cast<std::size_t>(max_key + 1);

    if (pool <= 8 * total + 1024) {
      constexpr std::int64_t kNone = -1;
      std::vector<std::int64_t> first(pool, kNone);
      std::vector<std::uint8_t> many(pool, 0);
      for (std::size_t x = 0; x < n; ++x) {
        for (KeyId k : sample.rings[x]) {
          auto& f = first[static_cast<std::size_t>(k)];
          if (f == kNone) {
            f = static_cast<std::int64_t>(x);
          } else {
            many[static_cast<std::size_t>(k)] = 1;
            if (uf) uf->unite(static_cast<std::size_t>(f), x);
          }
        }
      }
      for (std::size_t x = 0; x < n; ++x) {
        for (KeyId k : sample.rings[x]) {
          if (many[static_cast<std::size_t>(k)]) {
            shared_flag[x] = 1;
            break;
          }
        }
      }
      return;
    }

    std::vector<std::pair<KeyId, std::size_t>> pairs;
    pairs.reserve(total);
    for (std::size_t x = 0; x < n; ++x)
      for (KeyId k : sample.rings[x]) pairs.emplace_back(k, x);
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
      std::size_t j = i + 1;
      while (j < pairs.size() && pairs[j].first == pairs[i].first) ++j;
      if (j - i > 1) {
        for (std::size_t t = i; t < j; ++t) {
          shared_flag[pairs[t].second] = 1;
          if (uf && t > i) uf->unite(pairs[i].second, pairs[t].second);
        }
      }
      i = j;
    }
  }
};

ComponentSummary summarize(const GraphSample& sample, UnionFind& uf,
                           const std::vector<std::uint8_t>& isolated) {
  const std::size_t n = sample.size();
  ComponentSummary s;
  s.labels.assign(n, -1);
  std::vector<std::int64_t> root_label(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t r = uf.find(x);
    if (root_label[r] < 0) {
      root_label[r] = s.num_components++;
      s.component_sizes.push_back(static_cast<std::int64_t>(uf.component_size(r)));
    }
    s.labels[x] = root_label[r];
    if (isolated[x]) {
      ++s.J_n;
      if (sample.groups[x] == 0) ++s.I_n;
    }
  }
  std::sort(s.component_sizes.begin(), s.component_sizes.end());
  s.is_connected = s.num_components == 1;
  return s;
}

}  // namespace

ComponentSummary components(const GraphSample& sample) {
  UnionFind uf(sample.size());
  KeyIndex index(sample, &uf);
  std::vector<std::uint8_t> isolated(sample.size());
  for (std::size_t x = 0; x < sample.size(); ++x) isolated[x] = !index.shared_flag[x];
  return summarize(sample, uf, isolated);
}

bool edge_exists(std::span<const KeyId> ring_a, std::span<const KeyId> ring_b) {
  auto a = ring_a.begin();
  auto b = ring_b.begin();
  while (a != ring_a.end() && b != ring_b.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

ComponentSummary naive_components(const GraphSample& sample, std::int64_t cap) {
  const std::size_t n = sample.size();
  if (static_cast<std::int64_t>(n) > cap)
    throw std::length_error("naive_components: n = " + std::to_string(n) +
                            " exceeds cap " + std::to_string(cap));

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (edge_exists(sample.rings[x], sample.rings[y])) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }

  // BFS from each unvisited node in id order gives the canonical labels.
  UnionFind uf(n);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint8_t> isolated(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    isolated[s] = adj[s].empty();
    if (seen[s]) continue;
    seen[s] = 1;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t y : adj[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          uf.unite(s, y);
          queue.push_back(y);
        }
      }
    }
  }
  return summarize(sample, uf, isolated);
}

IsolationStats isolated_nodes(const GraphSample& sample) {
  KeyIndex index(sample, nullptr);
  IsolationStats stats;
  for (std::size_t x = 0; x < sample.size(); ++x) {
    if (index.shared_flag[x]) continue;
    stats.isolated.push_back(static_cast<std::int64_t>(x));
    ++stats.J_n;
    if (sample.groups[x] == 0) ++stats.I_n;
  }
  return stats;
}

}  // namespace rkg
