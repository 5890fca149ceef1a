#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rkg/model.hpp"

namespace rkg {

/// C(P - A, B) / C(P, B): the probability that a uniformly random B-subset of
/// a P-element pool avoids a fixed A-subset.
///
/// Evaluated as exp(sum_{t<B} log1p(-A / (P - t))). Returns 1 when A or B is 0
/// and 0 when B > P - A. Throws std::domain_error for negative arguments or
/// A > P or B > P.
double binom_tail_ratio(std::int64_t P, std::int64_t A, std::int64_t B);

/// Natural log of binom_tail_ratio; -inf when the ratio is 0.
double log_binom_tail_ratio(std::int64_t P, std::int64_t A, std::int64_t B);

/// Probability that independent uniform rings of sizes ki and kj drawn from a
/// pool of P keys share at least one key: 1 - C(P-ki, kj)/C(P, kj).
///
/// Computed with -expm1 on the log ratio, so small probabilities keep full
/// relative precision. Symmetric in (ki, kj) bit-for-bit because the shorter
/// product is always used. Ring sizes of 0 are accepted and give 0.
double edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj);

/// sum_j a_j * edge_prob(P, K[group], K[j]). `group` is 0-based.
double mean_edge_prob(std::int64_t P, std::span<const double> a,
                      std::span<const std::int64_t> K, int group);
double mean_edge_prob(const ModelParams& params, int group);

/// b_1: mean edge probability seen from the smallest-ring group.
inline double b1(const ModelParams& params) { return mean_edge_prob(params, 0); }

/// 1 - edge_prob(P, ki, kj), without the cancellation of forming it from
/// edge_prob when the edge probability is close to 1.
double non_edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj);

/// sum_j a_j * non_edge_prob(P, K[group], K[j]): the complement of
/// mean_edge_prob when a sums to 1, accurate to full relative precision.
double mean_non_edge_prob(std::int64_t P, std::span<const double> a,
                          std::span<const std::int64_t> K, int group);

/// (ln n + beta) / n.
double critical_bound(std::int64_t n, double beta);

/// beta with b_1 = (ln n + beta) / n.
double beta_from_b1(std::int64_t n, double b1_value);
double beta_from_params(const ModelParams& params);

/// ki * kj / P. Not a probability; may exceed 1.
double approx_edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj);

/// Finite-n stand-ins for the asymptotic hypotheses. Advisory only.
struct ConditionFlags {
  bool pool_at_least_n = false;        // P >= n
  bool k_min_above_sqrt_p_over_n = false;  // K_1 >= sqrt(P / n)
  bool k_max_below_sqrt_p = false;     // K_m <= sqrt(P)
  bool k_sorted = false;
  bool many_groups = false;            // m > ln n; the asymptotics treat m as a constant

  bool all_hold() const {
    return pool_at_least_n && k_min_above_sqrt_p_over_n && k_max_below_sqrt_p && k_sorted;
  }
};

ConditionFlags check_scaling_conditions(const ModelParams& params);

struct ScalingReport {
  Eigen::MatrixXd p;         // p(i, j) = edge_prob(P, K_i, K_j)
  Eigen::VectorXd b;         // b(i) = sum_j a_j p(i, j)
  double b1 = 0.0;
  double beta_n = 0.0;
  Eigen::MatrixXd approx_p;  // K_i K_j / P
  ConditionFlags flags;
};

ScalingReport scaling_report(const ModelParams& params);

}  // namespace rkg
