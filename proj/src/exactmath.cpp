#include "rkg/exactmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rkg {

namespace {

void check_tail_args(std::int64_t P, std::int64_t A, std::int64_t B) {
  if (P < 0 || A < 0 || B < 0 || A > P || B > P) {
    throw std::domain_error("binom_tail_ratio: need 0 <= A, B <= P (P=" + std::to_string(P) +
                            ", A=" + std::to_string(A) + ", B=" + std::to_string(B) + ")");
  }
}

// Caller has validated arguments.
double log_tail_unchecked(std::int64_t P, std::int64_t A, std::int64_t B) {
  if (A == 0 || B == 0) return 0.0;
  if (B > P - A) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::int64_t t = 0; t < B; ++t) {
    sum += std::log1p(-static_cast<double>(A) / static_cast<double>(P - t));
  }
  return sum;
}

}  // namespace

double log_binom_tail_ratio(std::int64_t P, std::int64_t A, std::int64_t B) {
  check_tail_args(P, A, B);
  return log_tail_unchecked(P, A, B);
}

double binom_tail_ratio(std::int64_t P, std::int64_t A, std::int64_t B) {
  return std::exp(log_binom_tail_ratio(P, A, B));
}

double edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj) {
  check_tail_args(P, ki, kj);
  // C(P-ki, kj)/C(P, kj) == C(P-kj, ki)/C(P, ki); iterate over the shorter side.
  const auto [lo, hi] = std::minmax(ki, kj);
  return -std::expm1(log_tail_unchecked(P, hi, lo));
}

double mean_edge_prob(std::int64_t P, std::span<const double> a,
                      std::span<const std::int64_t> K, int group) {
  if (a.size() != K.size() || group < 0 || group >= static_cast<int>(K.size()))
    throw std::invalid_argument("mean_edge_prob: group out of range");
  double sum = 0.0;
  for (std::size_t j = 0; j < K.size(); ++j) sum += a[j] * edge_prob(P, K[group], K[j]);
  return sum;
}

double non_edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj) {
  check_tail_args(P, ki, kj);
  const auto [lo, hi] = std::minmax(ki, kj);
  return std::exp(log_tail_unchecked(P, hi, lo));
}

double mean_non_edge_prob(std::int64_t P, std::span<const double> a,
                          std::span<const std::int64_t> K, int group) {
  if (a.size() != K.size() || group < 0 || group >= static_cast<int>(K.size()))
    throw std::invalid_argument("mean_non_edge_prob: group out of range");
  double sum = 0.0;
  for (std::size_t j = 0; j < K.size(); ++j) sum += a[j] * non_edge_prob(P, K[group], K[j]);
  return sum;
}

double mean_edge_prob(const ModelParams& params, int group) {
  return mean_edge_prob(params.P, params.a, params.K, group);
}

double critical_bound(std::int64_t n, double beta) {
  return (std::log(static_cast<double>(n)) + beta) / static_cast<double>(n);
}

double beta_from_b1(std::int64_t n, double b1_value) {
  return static_cast<double>(n) * b1_value - std::log(static_cast<double>(n));
}

double beta_from_params(const ModelParams& params) {
  require_valid(params);
  return beta_from_b1(params.n, b1(params));
}

double approx_edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj) {
  return static_cast<double>(ki) * static_cast<double>(kj) / static_cast<double>(P);
}

ConditionFlags check_scaling_conditions(const ModelParams& params) {
  ConditionFlags f;
  const double n = static_cast<double>(params.n);
  const double P = static_cast<double>(params.P);
  f.pool_at_least_n = params.P >= params.n;
  f.k_min_above_sqrt_p_over_n = static_cast<double>(params.k_min()) >= std::sqrt(P / n);
  f.k_max_below_sqrt_p = static_cast<double>(params.k_max()) <= std::sqrt(P);
  f.k_sorted = std::is_sorted(params.K.begin(), params.K.end());
  f.many_groups = static_cast<double>(params.m) > std::log(n);
  return f;
}

ScalingReport scaling_report(const ModelParams& params) {
  require_valid(params);
  const int m = params.m;
  ScalingReport r;
  r.p.resize(m, m);
  r.approx_p.resize(m, m);
  r.b.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      r.p(i, j) = r.p(j, i) = edge_prob(params.P, params.K[i], params.K[j]);
      r.approx_p(i, j) = r.approx_p(j, i) = approx_edge_prob(params.P, params.K[i], params.K[j]);
    }
  }
  for (int i = 0; i < m; ++i) r.b(i) = mean_edge_prob(params, i);
  r.b1 = r.b(0);
  r.beta_n = beta_from_b1(params.n, r.b1);
  r.flags = check_scaling_conditions(params);
  return r;
}

}  // namespace rkg
