#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rkg/model.hpp"

namespace rkg {

// Parameter-vector couplings between two key graph laws on the same n, a, P.
//
// star:  K* differs from K only in the largest ring size, chosen as large as
//        possible while b_1 stays at or below (ln n + max(beta, -ln ln n)) / n.
//        G(K) is then a spanning subgraph of G(K*).
// pound: K# is built by the T_n / l / Q_j procedure so that K# <= K
//        coordinatewise while b_1(K#) reaches (ln n + min(beta, ln ln n)) / n.
//        G(K#) is then a spanning subgraph of G(K).
//
// When beta is the one implied by (a, K, P) and is not clamped, the bound is
// b_1(K) itself. Comparisons against it are then made between complements
// 1 - b_1, which stay accurate when b_1 is within rounding of 1. Otherwise
// the bound is the double (ln n + beta~) / n. Either way every comparison
// has a relative slack of kBoundRelTol, so exact ties compare as equal.

inline constexpr double kBoundRelTol = 1e-12;

/// lhs <= bound, up to kBoundRelTol.
bool at_most_bound(double lhs, double bound);
/// lhs >= bound, up to kBoundRelTol.
bool at_least_bound(double lhs, double bound);

enum class CouplingDirection { star, pound };

struct SearchOptions {
  /// Replace every binary search by an exhaustive scan over [0, P].
  bool linear_scan = false;
};

/// max{beta, -ln ln n}. Throws std::domain_error for n < 3.
double beta_tilde_star(double beta, std::int64_t n);
/// min{beta, ln ln n}. Throws std::domain_error for n < 3.
double beta_tilde_pound(double beta, std::int64_t n);

struct TnResult {
  std::int64_t value = 0;
  bool negative_bound = false;  // (ln n + beta_tilde)/n < 0; value forced to 0
};

/// Largest Y in [0, P] with edge_prob(P, Y, Y) <= (ln n + beta_tilde) / n.
TnResult compute_Tn(std::int64_t P, std::int64_t n, double beta_tilde, SearchOptions opts = {});

/// Smallest Z in [0, P] such that b_1 of the vector
///   prefix ++ [Z] ++ K[j+1 .. m]
/// reaches (ln n + beta_tilde) / n, taken as b_1(K) when beta_tilde equals
/// beta_from_params(params). `group` is 0-based and prefix must hold
/// exactly `group` entries. Returns P + 1 when no Z <= P reaches the bound.
std::int64_t compute_Qjn(const ModelParams& params, std::span<const std::int64_t> prefix, int group,
                         double beta_tilde, SearchOptions opts = {});

/// A search result next to its neighbouring value, both evaluated.
struct BoundaryWitness {
  std::string name;        // "T_n", "K*_m", "Q_3", ...
  std::int64_t value = 0;
  double lhs = 0.0;        // expression at value
  std::optional<std::int64_t> neighbor;  // value+1 for argmax, value-1 for argmin
  std::optional<double> neighbor_lhs;
  double bound = 0.0;
};

struct QStep {
  int group = 0;           // 0-based
  std::int64_t value = 0;  // P + 1 when infeasible
  bool infeasible = false;
  bool above_Tn = false;   // took the break branch
};

struct CouplingCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CouplingResult {
  CouplingDirection direction = CouplingDirection::star;
  std::vector<std::int64_t> K_in;
  std::vector<std::int64_t> K_out;
  double beta = 0.0;
  bool beta_overridden = false;  // beta differs from beta_from_params by > 1e-6
  bool in_regime = false;        // star: beta < 0; pound: beta > 0
  double beta_tilde = 0.0;
  double bound = 0.0;            // (ln n + beta_tilde) / n
  bool bound_is_b1 = false;      // beta~ is beta_from_params: bound taken as b_1(K_in)
  double beta_out = 0.0;         // n b_1(K_out) - ln n
  bool infeasible = false;

  // pound only
  TnResult T_n;
  bool all_Tn_branch = false;    // K_1 >= T_n
  int ell = 0;                   // 1-based count of groups kept verbatim
  std::vector<QStep> Q;

  std::vector<BoundaryWitness> witnesses;
  std::vector<CouplingCheck> checks;

  bool all_checks_pass() const;
};

CouplingResult star_coupling(const ModelParams& params, SearchOptions opts = {});
CouplingResult star_coupling(const ModelParams& params, double beta, SearchOptions opts = {});

CouplingResult pound_coupling(const ModelParams& params, SearchOptions opts = {});
CouplingResult pound_coupling(const ModelParams& params, double beta, SearchOptions opts = {});

/// Recomputes every finite-n property of a coupling result from scratch:
/// ordering of K_out, its relation to K_in, boundary witnesses of each
/// argmax/argmin and the position of beta_out relative to beta_tilde.
std::vector<CouplingCheck> verify_coupling(const CouplingResult& result, const ModelParams& params);

/// Largest x in [lo, hi] with f(x) <= bound for nondecreasing f; lo - 1 if none.
std::int64_t search_last_at_most(std::int64_t lo, std::int64_t hi,
                                 const std::function<double(std::int64_t)>& f, double bound,
                                 SearchOptions opts = {});
/// Smallest x in [lo, hi] with f(x) >= bound for nondecreasing f; hi + 1 if none.
std::int64_t search_first_at_least(std::int64_t lo, std::int64_t hi,
                                   const std::function<double(std::int64_t)>& f, double bound,
                                   SearchOptions opts = {});

const char* to_string(CouplingDirection d);

}  // namespace rkg
