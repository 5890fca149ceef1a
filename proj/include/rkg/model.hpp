#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rkg {

using KeyId = std::int64_t;

/// Parameters of one heterogeneous random key graph law G(n, a, K, P).
///
/// Groups are 0-based in memory; everything user-facing (reports, CLI,
/// sample files) numbers them from 1.
struct ModelParams {
  std::int64_t n = 2;
  int m = 1;
  std::int64_t P = 1;
  std::vector<double> a;
  std::vector<std::int64_t> K;

  /// Key ring size of the smallest group.
  std::int64_t k_min() const { return K.front(); }
  std::int64_t k_max() const { return K.back(); }

  bool operator==(const ModelParams&) const = default;
};

inline constexpr double kProbabilitySumTolerance = 1e-9;

struct Violation {
  std::string code;     // machine-readable, e.g. "K_not_sorted"
  std::string message;  // e.g. "K not sorted"
  std::optional<int> index;  // 0-based offending position, if any
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  /// All messages joined by "; ".
  std::string summary() const;
};

ValidationReport validate(const ModelParams& params);

/// Throws std::invalid_argument carrying the validation summary.
void require_valid(const ModelParams& params);

struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  bool operator==(const RngSeed&) const = default;
};

/// SplitMix64 finalizer. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Child stream for trial `trial_index`:
///   stream_id' = mix64(mix64(master_seed ^ mix64(stream_id)) + (trial_index + 1) * 0x9E3779B97F4A7C15)
/// The inner term is fixed per parent seed and the multiplier is odd, so the
/// map is injective in trial_index.
RngSeed derive_stream(const RngSeed& seed, std::uint64_t trial_index);

/// Deterministic random source bound to one RngSeed. Uses mt19937_64, whose
/// output sequence is fixed by the standard, and draws bounded integers by
/// rejection so results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(const RngSeed& seed);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace rkg
