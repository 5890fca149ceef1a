#include "rkg/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rkg/exactmath.hpp"

namespace rkg {

bool at_most_bound(double lhs, double bound) {
  return lhs <= bound + kBoundRelTol * std::abs(bound);
}

bool at_least_bound(double lhs, double bound) {
  return lhs >= bound - kBoundRelTol * std::abs(bound);
}

namespace {

double log_log(std::int64_t n) {
  if (n < 3) throw std::domain_error("ln ln n needs n >= 3 (n=" + std::to_string(n) + ")");
  return std::log(std::log(static_cast<double>(n)));
}

std::vector<std::int64_t> with_entry(std::span<const std::int64_t> K, int idx, std::int64_t v) {
  std::vector<std::int64_t> out(K.begin(), K.end());
  out[static_cast<std::size_t>(idx)] = v;
  return out;
}

// prefix ++ [z] ++ K[group+1 ..].
std::vector<std::int64_t> mixed(const ModelParams& params, std::span<const std::int64_t> prefix, int group,
                                std::int64_t z) {
  std::vector<std::int64_t> v(prefix.begin(), prefix.end());
  v.push_back(z);
  v.insert(v.end(), params.K.begin() + group + 1, params.K.end());
  return v;
}

double mixed_b1(const ModelParams& params, std::span<const std::int64_t> prefix, int group,
                std::int64_t z) {
  return mean_edge_prob(params.P, params.a, mixed(params, prefix, group, z), 0);
}

// b_1 with the last group's ring size replaced by x. For m = 1 this is the
// self-pairing edge_prob(P, x, x).
double star_objective(const ModelParams& params, std::int64_t x) {
  return mean_edge_prob(params.P, params.a, with_entry(params.K, params.m - 1, x), 0);
}

bool beta_is_overridden(const ModelParams& params, double beta) {
  return !(std::abs(beta_from_params(params) - beta) <= 1e-6);
}

// The threshold every search compares against. In reference mode it is
// b_1(K) for the parameter vector itself, and b_1-type values are compared
// through their complements q = sum_j a_j (1 - p_1j).
class Target {
 public:
  static Target numeric(double bound) {
    Target t;
    t.bound_ = bound;
    return t;
  }

  static Target reference(const ModelParams& params) {
    Target t;
    t.reference_ = true;
    t.q_ref_ = mean_non_edge_prob(params.P, params.a, params.K, 0);
    long double mass = 0.0L;
    for (double x : params.a) mass += x;
    t.mass_gap_ = static_cast<double>(1.0L - mass);
    t.bound_ = mean_edge_prob(params.P, params.a, params.K, 0);
    return t;
  }

  double bound() const { return bound_; }

  /// b_1(K) <= threshold for a vector sharing the reference a.
  bool mix_at_most(std::int64_t P, std::span<const double> a, std::span<const std::int64_t> K) const {
    if (!reference_) return at_most_bound(mean_edge_prob(P, a, K, 0), bound_);
    return mean_non_edge_prob(P, a, K, 0) >= q_ref_ - kBoundRelTol * q_ref_;
  }

  bool mix_at_least(std::int64_t P, std::span<const double> a, std::span<const std::int64_t> K) const {
    if (!reference_) return at_least_bound(mean_edge_prob(P, a, K, 0), bound_);
    return mean_non_edge_prob(P, a, K, 0) <= q_ref_ + kBoundRelTol * q_ref_;
  }

  /// edge_prob(P, y, y) <= threshold.
  bool self_at_most(std::int64_t P, std::int64_t y) const {
    if (!reference_) return at_most_bound(edge_prob(P, y, y), bound_);
    // 1 - t <= mass - q_ref  <=>  t >= q_ref + (1 - mass)
    const double rhs = q_ref_ + mass_gap_;
    return non_edge_prob(P, y, y) >= rhs - kBoundRelTol * std::abs(rhs);
  }

  bool negative() const { return !reference_ && bound_ < 0.0; }

 private:
  bool reference_ = false;
  double bound_ = 0.0;
  double q_ref_ = 0.0;
  double mass_gap_ = 0.0;
};

Target make_target(const ModelParams& params, bool bound_is_b1, double beta_tilde) {
  return bound_is_b1 ? Target::reference(params) : Target::numeric(critical_bound(params.n, beta_tilde));
}

// Largest x in [lo, hi] with pred(x), for pred true on a prefix; lo - 1 if none.
std::int64_t last_true(std::int64_t lo, std::int64_t hi, const std::function<bool(std::int64_t)>& pred,
                       SearchOptions opts) {
  if (opts.linear_scan) {
    std::int64_t best = lo - 1;
    for (std::int64_t x = lo; x <= hi; ++x)
      if (pred(x)) best = x;
    return best;
  }
  // Invariant: pred(lo-1) holds vacuously, pred(hi+1) fails vacuously.
  std::int64_t good = lo - 1, bad = hi + 1;
  while (bad - good > 1) {
    const std::int64_t mid = good + (bad - good) / 2;
    if (pred(mid))
      good = mid;
    else
      bad = mid;
  }
  return good;
}

// Smallest x in [lo, hi] with pred(x), for pred true on a suffix; hi + 1 if none.
std::int64_t first_true(std::int64_t lo, std::int64_t hi, const std::function<bool(std::int64_t)>& pred,
                        SearchOptions opts) {
  if (opts.linear_scan) {
    for (std::int64_t x = lo; x <= hi; ++x)
      if (pred(x)) return x;
    return hi + 1;
  }
  std::int64_t bad = lo - 1, good = hi + 1;
  while (good - bad > 1) {
    const std::int64_t mid = bad + (good - bad) / 2;
    if (pred(mid))
      good = mid;
    else
      bad = mid;
  }
  return good;
}

TnResult tn_search(std::int64_t P, const Target& target, SearchOptions opts) {
  if (target.negative()) return {0, true};
  return {last_true(0, P, [&](std::int64_t y) { return target.self_at_most(P, y); }, opts), false};
}

std::int64_t q_search(const ModelParams& params, std::span<const std::int64_t> prefix, int group,
                      const Target& target, SearchOptions opts) {
  auto pred = [&](std::int64_t z) {
    return target.mix_at_least(params.P, params.a, mixed(params, prefix, group, z));
  };
  return first_true(0, params.P, pred, opts);
}

}  // namespace

std::int64_t search_last_at_most(std::int64_t lo, std::int64_t hi,
                                 const std::function<double(std::int64_t)>& f, double bound,
                                 SearchOptions opts) {
  return last_true(lo, hi, [&](std::int64_t x) { return at_most_bound(f(x), bound); }, opts);
}

std::int64_t search_first_at_least(std::int64_t lo, std::int64_t hi,
                                   const std::function<double(std::int64_t)>& f, double bound,
                                   SearchOptions opts) {
  return first_true(lo, hi, [&](std::int64_t x) { return at_least_bound(f(x), bound); }, opts);
}

double beta_tilde_star(double beta, std::int64_t n) { return std::max(beta, -log_log(n)); }

double beta_tilde_pound(double beta, std::int64_t n) { return std::min(beta, log_log(n)); }

TnResult compute_Tn(std::int64_t P, std::int64_t n, double beta_tilde, SearchOptions opts) {
  if (P < 1 || n < 2) throw std::domain_error("compute_Tn: need P >= 1 and n >= 2");
  return tn_search(P, Target::numeric(critical_bound(n, beta_tilde)), opts);
}

std::int64_t compute_Qjn(const ModelParams& params, std::span<const std::int64_t> prefix, int group,
                         double beta_tilde, SearchOptions opts) {
  if (group < 0 || group >= params.m || static_cast<int>(prefix.size()) != group)
    throw std::invalid_argument("compute_Qjn: prefix must hold exactly `group` entries");
  const bool is_b1 = beta_tilde == beta_from_params(params);
  return q_search(params, prefix, group, make_target(params, is_b1, beta_tilde), opts);
}

bool CouplingResult::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const char* to_string(CouplingDirection d) {
  return d == CouplingDirection::star ? "star" : "pound";
}

CouplingResult star_coupling(const ModelParams& params, SearchOptions opts) {
  require_valid(params);
  return star_coupling(params, beta_from_params(params), opts);
}

CouplingResult star_coupling(const ModelParams& params, double beta, SearchOptions opts) {
  require_valid(params);
  CouplingResult r;
  r.direction = CouplingDirection::star;
  r.K_in = params.K;
  r.beta = beta;
  r.beta_overridden = beta_is_overridden(params, beta);
  r.in_regime = beta < 0.0;
  r.beta_tilde = beta_tilde_star(beta, params.n);
  r.bound_is_b1 = beta == beta_from_params(params) && r.beta_tilde == beta;
  const Target target = make_target(params, r.bound_is_b1, r.beta_tilde);
  r.bound = target.bound();

  const int last = params.m - 1;
  auto pred = [&](std::int64_t x) {
    return target.mix_at_most(params.P, params.a, with_entry(params.K, last, x));
  };
  const std::int64_t x = last_true(0, params.P, pred, opts);
  r.K_out = params.K;
  if (x < 0) {
    r.infeasible = true;
  } else {
    r.K_out.back() = x;
  }
  r.beta_out = beta_from_b1(params.n, mean_edge_prob(params.P, params.a, r.K_out, 0));

  auto f = [&](std::int64_t v) { return star_objective(params, v); };
  BoundaryWitness w{"K*_m", r.K_out.back(), f(r.K_out.back()), std::nullopt, std::nullopt, r.bound};
  if (!r.infeasible && r.K_out.back() < params.P) {
    w.neighbor = r.K_out.back() + 1;
    w.neighbor_lhs = f(*w.neighbor);
  }
  r.witnesses.push_back(w);
  r.checks = verify_coupling(r, params);
  return r;
}

CouplingResult pound_coupling(const ModelParams& params, SearchOptions opts) {
  require_valid(params);
  return pound_coupling(params, beta_from_params(params), opts);
}

CouplingResult pound_coupling(const ModelParams& params, double beta, SearchOptions opts) {
  require_valid(params);
  const int m = params.m;
  const std::int64_t P = params.P;
  const auto& K = params.K;

  CouplingResult r;
  r.direction = CouplingDirection::pound;
  r.K_in = K;
  r.beta = beta;
  r.beta_overridden = beta_is_overridden(params, beta);
  r.in_regime = beta > 0.0;
  r.beta_tilde = beta_tilde_pound(beta, params.n);
  r.bound_is_b1 = beta == beta_from_params(params) && r.beta_tilde == beta;
  const Target target = make_target(params, r.bound_is_b1, r.beta_tilde);
  r.bound = target.bound();
  r.T_n = tn_search(P, target, opts);
  const std::int64_t T = r.T_n.value;

  {
    BoundaryWitness w{"T_n", T, edge_prob(P, T, T), std::nullopt, std::nullopt, r.bound};
    if (T < P) {
      w.neighbor = T + 1;
      w.neighbor_lhs = edge_prob(P, T + 1, T + 1);
    }
    r.witnesses.push_back(w);
  }

  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(m));
  if (K.front() >= T) {
    r.all_Tn_branch = true;
    out.assign(static_cast<std::size_t>(m), T);
  } else {
    // K_1 < T_n, so at least one group is kept.
    r.ell = static_cast<int>(std::upper_bound(K.begin(), K.end(), T) - K.begin());
    out.assign(K.begin(), K.begin() + r.ell);
    for (int j = r.ell; j < m; ++j) {
      const std::int64_t q = q_search(params, out, j, target, opts);
      QStep step{j, q, q > P, q > T};
      r.Q.push_back(step);

      BoundaryWitness w{"Q_" + std::to_string(j + 1), q, 0.0, std::nullopt, std::nullopt, r.bound};
      if (!step.infeasible) w.lhs = mixed_b1(params, out, j, q);
      if (q >= 1 && !step.infeasible) {
        w.neighbor = q - 1;
        w.neighbor_lhs = mixed_b1(params, out, j, q - 1);
      }
      r.witnesses.push_back(w);

      if (step.infeasible) {
        // No ring size reaches the bound: keep K from here on and flag it.
        r.infeasible = true;
        out.insert(out.end(), K.begin() + j, K.end());
        break;
      }
      if (step.above_Tn) {
        out.push_back(q);
        out.insert(out.end(), K.begin() + j + 1, K.end());
        break;
      }
      out.push_back(T);
    }
  }
  r.K_out = std::move(out);
  r.beta_out = beta_from_b1(params.n, mean_edge_prob(P, params.a, r.K_out, 0));
  r.checks = verify_coupling(r, params);
  return r;
}

namespace {

std::string vec_str(std::span<const std::int64_t> v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

void add(std::vector<CouplingCheck>& checks, std::string name, bool ok, std::string detail = {}) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace

std::vector<CouplingCheck> verify_coupling(const CouplingResult& r, const ModelParams& params) {
  std::vector<CouplingCheck> checks;
  const auto& K = params.K;
  const auto& out = r.K_out;
  const std::int64_t n = params.n;
  const std::int64_t P = params.P;

  if (static_cast<int>(out.size()) != params.m || r.K_in != K) {
    add(checks, "shape", false, "K_out " + vec_str(out) + " does not match params");
    return checks;
  }
  const bool star = r.direction == CouplingDirection::star;
  const double beta_tilde = star ? beta_tilde_star(r.beta, n) : beta_tilde_pound(r.beta, n);
  const bool is_b1 = r.beta == beta_from_params(params) && beta_tilde == r.beta;
  const Target target = make_target(params, is_b1, beta_tilde);
  add(checks, "bound_consistent",
      beta_tilde == r.beta_tilde && is_b1 == r.bound_is_b1 && target.bound() == r.bound,
      "beta~ = " + std::to_string(r.beta_tilde));

  const bool in_range = std::all_of(out.begin(), out.end(), [P](auto k) { return 0 <= k && k <= P; });
  add(checks, "K_out_in_range", in_range, vec_str(out));
  add(checks, "K_out_sorted", std::is_sorted(out.begin(), out.end()), vec_str(out));
  if (!in_range) return checks;
  const double b1_out = mean_edge_prob(P, params.a, out, 0);
  const double beta_out = beta_from_b1(n, b1_out);
  add(checks, "beta_out_consistent", std::abs(beta_out - r.beta_out) <= 1e-9 * std::max(1.0, std::abs(beta_out)));
  auto at_most = [&](std::span<const std::int64_t> v) { return target.mix_at_most(P, params.a, v); };
  auto at_least = [&](std::span<const std::int64_t> v) { return target.mix_at_least(P, params.a, v); };

  if (star) {
    const int last = params.m - 1;
    add(checks, "feasible", !r.infeasible);
    add(checks, "K_prefix_unchanged", std::equal(out.begin(), out.end() - 1, K.begin()));
    add(checks, "K_m_not_decreased", out[last] >= K[last],
        std::to_string(out[last]) + " vs " + std::to_string(K[last]));

    const bool upper = at_most(out);
    bool next_exceeds = true;
    double delta = 0.0;
    if (out[last] < P) {
      const auto next = with_entry(out, last, out[last] + 1);
      next_exceeds = !at_most(next);
      delta = static_cast<double>(n) * (mean_edge_prob(P, params.a, next, 0) - b1_out);
    }
    add(checks, "K*_m_maximal", upper && next_exceeds);

    // beta* <= beta~*  <=>  b_1(K*) <= bound, and with delta the beta step to
    // the next ring size, beta* > beta~* - delta  <=>  b_1(next) > bound.
    add(checks, "beta_out_upper", upper,
        "beta* = " + std::to_string(beta_out) + ", beta~* = " + std::to_string(r.beta_tilde));
    if (out[last] < P) add(checks, "beta_out_lower", next_exceeds, "gap to next ring size = " + std::to_string(delta));
    return checks;
  }

  // pound
  bool dominated = true;
  for (int j = 0; j < params.m; ++j) dominated = dominated && out[j] <= K[j];
  add(checks, "K_out_dominated", dominated, vec_str(out) + " <= " + vec_str(K));

  const TnResult tn = tn_search(P, target, {});
  const std::int64_t T = r.T_n.value;
  bool tn_ok = tn.value == T && tn.negative_bound == r.T_n.negative_bound;
  if (!r.T_n.negative_bound) {
    tn_ok = tn_ok && target.self_at_most(P, T);
    if (T < P) tn_ok = tn_ok && !target.self_at_most(P, T + 1);
  }
  add(checks, "T_n_maximal", tn_ok, "T_n = " + std::to_string(T));

  if (r.all_Tn_branch) {
    add(checks, "all_Tn_branch_consistent",
        K.front() >= T && std::all_of(out.begin(), out.end(), [T](auto k) { return k == T; }));
    add(checks, "beta_out_side", at_most(out),
        "beta# = " + std::to_string(beta_out) + " <= beta~# on the K_1 >= T_n branch");
    return checks;
  }

  const int ell = static_cast<int>(std::upper_bound(K.begin(), K.end(), T) - K.begin());
  add(checks, "ell_consistent", K.front() < T && ell == r.ell && std::equal(K.begin(), K.begin() + ell, out.begin()),
      "ell = " + std::to_string(r.ell));

  bool q_ok = true;
  std::string q_detail;
  for (const auto& step : r.Q) {
    const int j = step.group;
    const std::span<const std::int64_t> prefix(out.data(), static_cast<std::size_t>(j));
    const std::int64_t q = step.value;
    auto reaches = [&](std::int64_t z) { return at_least(mixed(params, prefix, j, z)); };
    bool ok;
    if (step.infeasible) {
      ok = q == P + 1 && !reaches(P);
    } else {
      ok = reaches(q) && (q == 0 || !reaches(q - 1));
      ok = ok && step.above_Tn == (q > T) && out[j] == (q > T ? q : T);
    }
    if (!ok) q_detail += "Q_" + std::to_string(j + 1) + " ";
    q_ok = q_ok && ok;
  }
  add(checks, "Q_minimal", q_ok, q_detail);
  add(checks, "feasible", !r.infeasible);
  add(checks, "beta_out_side", at_least(out),
      "beta# = " + std::to_string(beta_out) + ", beta~# = " + std::to_string(r.beta_tilde));
  return checks;
}

}  // namespace rkg
