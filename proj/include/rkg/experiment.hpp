#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rkg/model.hpp"

namespace rkg {

/// Which field of ModelParams a sweep or threshold search moves.
struct VaryField {
  enum class Kind { n, P, a, K };
  Kind kind = Kind::K;
  int index = 0;  // 0-based group for a and K

  /// "n", "P", "a_<i>" or "K_<i>" with 1-based i.
  std::string name() const;
  static VaryField parse(const std::string& text);

  bool operator==(const VaryField&) const = default;
};

/// Copy of base with the field set to value. Integer fields are rounded to
/// the nearest integer. Setting a_t rescales the other a entries by
/// (1 - value) / (1 - a_t) so the vector still sums to 1.
ModelParams with_field(const ModelParams& base, const VaryField& field, double value);

struct RecordFlags {
  bool connectivity = true;
  bool J_n = true;
  bool I_n = true;
  bool components = true;
};

struct TrialOutcome {
  bool connected = false;
  std::int64_t J_n = 0;
  std::int64_t I_n = 0;
  std::int64_t num_components = 0;

  bool operator==(const TrialOutcome&) const = default;
};

struct TrialAggregate {
  std::string vary;          // field name, empty for a plain run_trials
  double param_value = 0.0;
  ModelParams params;
  bool valid = true;
  std::string invalid_reason;

  std::int64_t trials = 0;
  std::int64_t connected_count = 0;
  double connected_prob = 0.0;
  double ci_low = 0.0;       // 95% Wilson
  double ci_high = 0.0;
  double mean_Jn = 0.0;
  double mean_In = 0.0;
  double mean_components = 0.0;
  double b1 = 0.0;
  double beta_n = 0.0;
  bool threshold_flag = false;  // b1 >= ln n / n

  bool operator==(const TrialAggregate&) const = default;
};

/// Samples G(params) from the given stream and decides connectivity.
TrialOutcome evaluate_trial(const ModelParams& params, const RngSeed& trial_seed);

/// Counts are summed, so the result does not depend on outcome order.
TrialAggregate aggregate(const ModelParams& params, std::span<const TrialOutcome> outcomes);

/// Trial t uses derive_stream(base, t). Trials run on `threads` workers
/// (0 = hardware concurrency); the result is independent of scheduling.
TrialAggregate run_trials(const ModelParams& params, std::int64_t trials, const RngSeed& base,
                          unsigned threads = 0);
/// Shorthand for base = {master_seed, 0}.
TrialAggregate run_trials(const ModelParams& params, std::int64_t trials, std::uint64_t master_seed,
                          unsigned threads = 0);

/// Runs only the listed trial indices, in the listed order. Used to check
/// order independence.
TrialAggregate run_trials_in_order(const ModelParams& params, std::span<const std::int64_t> order,
                                   const RngSeed& base);

struct SweepConfig {
  ModelParams base;
  VaryField vary;
  std::vector<double> values;
  std::int64_t trials = 1000;
  std::uint64_t master_seed = 0;
  RecordFlags record;
  unsigned threads = 0;
};

/// One row per grid value, in grid order. Grid point g runs
/// run_trials(params_g, trials, derive_stream({master_seed, 0}, g)), so
/// appending grid values never changes earlier rows. A grid value that
/// produces invalid parameters yields a row with valid = false.
std::vector<TrialAggregate> sweep(const SweepConfig& config);

/// 95% (z = 1.96 by default) Wilson score interval, clamped to [0, 1].
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double z = 1.96);

enum class ThresholdDirection { min, max };

struct ThresholdResult {
  std::optional<std::int64_t> value;  // empty when the crossing is outside the domain
  std::int64_t domain_lo = 0;
  std::int64_t domain_hi = 0;
  double target_bound = 0.0;          // (ln n + target_beta) / n
  double b1_at_value = 0.0;
  double beta_at_value = 0.0;
  std::optional<std::int64_t> neighbor;  // value -/+ 1, where the predicate fails
  std::optional<double> b1_at_neighbor;
};

struct ThresholdOptions {
  double target_beta = 0.0;
  std::int64_t p_cap = std::int64_t{1} << 40;
  std::int64_t n_cap = std::int64_t{1} << 40;
};

/// Extreme integer value of the varied field for which
/// b_1 >= (ln n + target_beta) / n. b_1 grows with every K_j and shrinks
/// with P, and the bound shrinks with n, so the predicate holds on an
/// interval touching one end of the domain:
///   K_j: domain [1, P], min gives the crossing
///   P:   domain [K_m, p_cap], max gives the crossing
///   n:   domain [2, n_cap], min gives the crossing
/// Throws std::invalid_argument for a_t, which has no monotone guarantee.
ThresholdResult find_threshold(const ModelParams& base, const VaryField& vary,
                               ThresholdDirection direction, ThresholdOptions opts = {});

/// CSV with header
/// vary,param_value,n,m,P,a,K,trials,connected_count,connected_prob,ci_low,ci_high,mean_Jn,mean_In,b1,beta_n,threshold_flag
std::string sweep_csv(std::span<const TrialAggregate> rows, const RecordFlags& record = {});

/// Self-contained gnuplot script plotting connected_prob against
/// param_value from `csv_path`.
std::string gnuplot_script(const std::string& csv_path, const std::string& vary_name);

}  // namespace rkg
