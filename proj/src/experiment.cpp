#include "rkg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rkg/exactmath.hpp"
#include "rkg/graphalgo.hpp"
#include "rkg/sampler.hpp"
#include "rkg/serialize.hpp"

namespace rkg {

std::string VaryField::name() const {
  switch (kind) {
    case Kind::n: return "n";
    case Kind::P: return "P";
    case Kind::a: return "a_" + std::to_string(index + 1);
    case Kind::K: return "K_" + std::to_string(index + 1);
  }
  return {};
}

VaryField VaryField::parse(const std::string& text) {
  if (text == "n") return {Kind::n, 0};
  if (text == "P") return {Kind::P, 0};
  if (text.size() > 2 && (text[0] == 'a' || text[0] == 'K') && text[1] == '_') {
    const std::string digits = text.substr(2);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const int i = std::stoi(digits);
      if (i >= 1) return {text[0] == 'a' ? Kind::a : Kind::K, i - 1};
    }
  }
  throw std::invalid_argument("unknown vary field '" + text + "' (expected n, P, a_<i> or K_<i>)");
}

ModelParams with_field(const ModelParams& base, const VaryField& field, double value) {
  ModelParams p = base;
  const auto as_int = static_cast<std::int64_t>(std::llround(value));
  switch (field.kind) {
    case VaryField::Kind::n: p.n = as_int; break;
    case VaryField::Kind::P: p.P = as_int; break;
    case VaryField::Kind::K:
      if (field.index >= static_cast<int>(p.K.size())) throw std::invalid_argument("vary index exceeds m");
      p.K[field.index] = as_int;
      break;
    case VaryField::Kind::a: {
      if (field.index >= static_cast<int>(p.a.size())) throw std::invalid_argument("vary index exceeds m");
      const double old = p.a[field.index];
      const double scale = old < 1.0 ? (1.0 - value) / (1.0 - old) : 0.0;
      for (std::size_t i = 0; i < p.a.size(); ++i)
        p.a[i] = static_cast<int>(i) == field.index ? value : p.a[i] * scale;
      break;
    }
  }
  return p;
}

TrialOutcome evaluate_trial(const ModelParams& params, const RngSeed& trial_seed) {
  const auto summary = components(sample_graph(params, trial_seed));
  return {summary.is_connected, summary.J_n, summary.I_n, summary.num_components};
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {lo, hi};
}

TrialAggregate aggregate(const ModelParams& params, std::span<const TrialOutcome> outcomes) {
  TrialAggregate agg;
  agg.params = params;
  agg.trials = static_cast<std::int64_t>(outcomes.size());
  std::int64_t sum_J = 0, sum_I = 0, sum_c = 0;
  for (const auto& o : outcomes) {
    agg.connected_count += o.connected ? 1 : 0;
    sum_J += o.J_n;
    sum_I += o.I_n;
    sum_c += o.num_components;
  }
  if (agg.trials > 0) {
    const double t = static_cast<double>(agg.trials);
    agg.connected_prob = static_cast<double>(agg.connected_count) / t;
    std::tie(agg.ci_low, agg.ci_high) = wilson_interval(agg.connected_count, agg.trials);
    agg.mean_Jn = static_cast<double>(sum_J) / t;
    agg.mean_In = static_cast<double>(sum_I) / t;
    agg.mean_components = static_cast<double>(sum_c) / t;
  }
  agg.b1 = b1(params);
  agg.beta_n = beta_from_b1(params.n, agg.b1);
  agg.threshold_flag = agg.b1 >= critical_bound(params.n, 0.0);
  return agg;
}

TrialAggregate run_trials(const ModelParams& params, std::int64_t trials, const RngSeed& base,
                          unsigned threads) {
  require_valid(params);
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, trials));

  auto work = [&](unsigned w) {
    for (std::int64_t t = w; t < trials; t += workers)
      outcomes[static_cast<std::size_t>(t)] = evaluate_trial(params, derive_stream(base, static_cast<std::uint64_t>(t)));
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return aggregate(params, outcomes);
}

TrialAggregate run_trials(const ModelParams& params, std::int64_t trials, std::uint64_t master_seed,
                          unsigned threads) {
  return run_trials(params, trials, RngSeed{master_seed, 0}, threads);
}

TrialAggregate run_trials_in_order(const ModelParams& params, std::span<const std::int64_t> order,
                                   const RngSeed& base) {
  require_valid(params);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(order.size());
  for (auto t : order) outcomes.push_back(evaluate_trial(params, derive_stream(base, static_cast<std::uint64_t>(t))));
  return aggregate(params, outcomes);
}

std::vector<TrialAggregate> sweep(const SweepConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const RngSeed root{config.master_seed, 0};
  std::vector<TrialAggregate> rows;
  rows.reserve(config.values.size());
  for (std::size_t g = 0; g < config.values.size(); ++g) {
    const double value = config.values[g];
    ModelParams params = with_field(config.base, config.vary, value);
    const auto report = validate(params);
    TrialAggregate row;
    if (report.ok()) {
      row = run_trials(params, config.trials, derive_stream(root, g), config.threads);
    } else {
      row.params = params;
      row.valid = false;
      row.invalid_reason = report.summary();
      row.trials = config.trials;
    }
    row.vary = config.vary.name();
    row.param_value = value;
    rows.push_back(std::move(row));
  }
  return rows;
}

ThresholdResult find_threshold(const ModelParams& base, const VaryField& vary,
                               ThresholdDirection direction, ThresholdOptions opts) {
  ThresholdResult r;
  switch (vary.kind) {
    case VaryField::Kind::K:
      if (vary.index < 0 || vary.index >= base.m) throw std::invalid_argument("vary index exceeds m");
      r.domain_lo = 1;
      r.domain_hi = base.P;
      break;
    case VaryField::Kind::P:
      r.domain_lo = std::max<std::int64_t>(1, base.k_max());
      r.domain_hi = opts.p_cap;
      break;
    case VaryField::Kind::n:
      r.domain_lo = 2;
      r.domain_hi = opts.n_cap;
      break;
    case VaryField::Kind::a:
      throw std::invalid_argument("find_threshold: b_1 is not monotone in a_t");
  }

  auto params_at = [&](std::int64_t v) { return with_field(base, vary, static_cast<double>(v)); };
  auto b1_at = [&](std::int64_t v) {
    const auto p = params_at(v);
    return mean_edge_prob(p.P, p.a, p.K, 0);
  };
  auto pred = [&](std::int64_t v) {
    return b1_at(v) >= critical_bound(params_at(v).n, opts.target_beta);
  };

  // The predicate is monotone in v: upward closed for K_j and n, downward
  // closed for P.
  const bool upward = vary.kind != VaryField::Kind::P;
  const bool want_first = direction == ThresholdDirection::min;
  if (upward != want_first) {
    // The requested end is the domain edge itself whenever it qualifies.
    const std::int64_t edge = want_first ? r.domain_lo : r.domain_hi;
    if (pred(edge)) r.value = edge;
  } else {
    std::int64_t lo = r.domain_lo, hi = r.domain_hi;
    if (upward) {
      // smallest v with pred(v)
      if (pred(hi)) {
        while (lo < hi) {
          const std::int64_t mid = lo + (hi - lo) / 2;
          if (pred(mid)) hi = mid; else lo = mid + 1;
        }
        r.value = lo;
        if (lo > r.domain_lo) r.neighbor = lo - 1;
      }
    } else {
      // largest v with pred(v)
      if (pred(lo)) {
        while (lo < hi) {
          const std::int64_t mid = lo + (hi - lo + 1) / 2;
          if (pred(mid)) lo = mid; else hi = mid - 1;
        }
        r.value = lo;
        if (lo < r.domain_hi) r.neighbor = lo + 1;
      }
    }
  }

  if (r.value) {
    const auto p = params_at(*r.value);
    r.target_bound = critical_bound(p.n, opts.target_beta);
    r.b1_at_value = b1_at(*r.value);
    r.beta_at_value = beta_from_b1(p.n, r.b1_at_value);
    if (r.neighbor) r.b1_at_neighbor = b1_at(*r.neighbor);
  } else {
    r.target_bound = critical_bound(base.n, opts.target_beta);
  }
  return r;
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string sweep_csv(std::span<const TrialAggregate> rows, const RecordFlags& record) {
  std::ostringstream os;
  os << "vary,param_value,n,m,P,a,K,trials,connected_count,connected_prob,ci_low,ci_high,"
        "mean_Jn,mean_In,b1,beta_n,threshold_flag\n";
  for (const auto& r : rows) {
    std::vector<std::string> a, K;
    for (double v : r.params.a) a.push_back(format_double(v));
    for (auto v : r.params.K) K.push_back(std::to_string(v));
    os << r.vary << ',' << format_double(r.param_value) << ',' << r.params.n << ',' << r.params.m << ','
       << r.params.P << ',' << join(a, ';') << ',' << join(K, ';') << ',' << r.trials << ',';
    if (!r.valid) {
      os << "NA,NA,NA,NA,NA,NA,NA,NA,invalid\n";
      continue;
    }
    auto cell = [](bool on, const std::string& v) { return on ? v : std::string("NA"); };
    os << cell(record.connectivity, std::to_string(r.connected_count)) << ','
       << cell(record.connectivity, format_double(r.connected_prob)) << ','
       << cell(record.connectivity, format_double(r.ci_low)) << ','
       << cell(record.connectivity, format_double(r.ci_high)) << ','
       << cell(record.J_n, format_double(r.mean_Jn)) << ','
       << cell(record.I_n, format_double(r.mean_In)) << ','
       << format_double(r.b1) << ',' << format_double(r.beta_n) << ','
       << (r.threshold_flag ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string gnuplot_script(const std::string& csv_path, const std::string& vary_name) {
  std::ostringstream os;
  os << "# gnuplot script: empirical connectivity probability\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << vary_name << "'\n"
     << "set ylabel 'P[connected]'\n"
     << "set yrange [-0.05:1.05]\n"
     << "set grid\n"
     << "plot '" << csv_path << "' using 2:10:11:12 with yerrorlines title 'empirical (95% Wilson)', \\\n"
     << "     '' using 2:(strcol(17) eq \"true\" ? 1 : 0) with steps dashtype 2 title 'b1 >= ln n / n'\n";
  return os.str();
}

}  // namespace rkg
