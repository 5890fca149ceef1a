// rkg: command-line front end for the heterogeneous random key graph toolkit.
//
// Exit codes: 0 success, 2 usage error, 3 invalid model parameters,
// 4 runtime failure. Errors are reported as one JSON line on stderr:
//   {"error":"validation","exit_code":3,"message":"K not sorted (index 2)"}

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rkg/coupling.hpp"
#include "rkg/exactmath.hpp"
#include "rkg/experiment.hpp"
#include "rkg/graphalgo.hpp"
#include "rkg/model.hpp"
#include "rkg/sampler.hpp"
#include "rkg/serialize.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct CliError : std::runtime_error {
  CliError(int code, std::string kind, const std::string& msg)
      : std::runtime_error(msg), code(code), kind(std::move(kind)) {}
  int code;
  std::string kind;
};

int report_error(int code, const std::string& kind, const std::string& message) {
  nlohmann::json j = {{"error", kind}, {"exit_code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return code;
}

struct ParamFlags {
  std::optional<std::int64_t> n;
  std::optional<int> m;
  std::optional<std::int64_t> P;
  std::string a;
  std::string K;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "Number of nodes");
    cmd->add_option("--m", m, "Number of groups (defaults to the length of --K)");
    cmd->add_option("--P", P, "Key pool size");
    cmd->add_option("--a", a, "Comma-separated group probabilities, e.g. 0.5,0.5");
    cmd->add_option("--K", K, "Comma-separated key ring sizes, e.g. 20,40");
    cmd->add_option("--config", config,
                    "Parameter file: flat 'key = value' lines or a JSON object; flags override it");
  }

  // Assembles parameters without validating them.
  rkg::ModelParams raw() const {
    rkg::ModelParams p;
    bool have_a = false, have_K = false;
    try {
      if (!config.empty()) {
        std::ifstream in(config);
        if (!in) throw CliError(kExitRuntime, "io", "cannot open config file '" + config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        p = first != std::string::npos && text[first] == '{'
                ? rkg::params_from_json(nlohmann::json::parse(text))
                : rkg::params_from_config(text);
        have_a = have_K = true;
      }
      if (n) p.n = *n;
      if (P) p.P = *P;
      if (!a.empty()) {
        p.a = rkg::parse_double_list(a);
        have_a = true;
      }
      if (!K.empty()) {
        p.K = rkg::parse_int_list(K);
        have_K = true;
      }
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(kExitUsage, "usage", e.what());
    }
    if (config.empty() && (!n || !P || !have_a || !have_K))
      throw CliError(kExitUsage, "usage", "model parameters need --n, --P, --a and --K (or --config)");
    if (m) p.m = *m;
    else if (config.empty() || !K.empty()) p.m = static_cast<int>(p.K.size());
    return p;
  }

  rkg::ModelParams build() const {
    auto p = raw();
    const auto report = rkg::validate(p);
    if (!report.ok()) throw CliError(kExitValidation, "validation", report.summary());
    return p;
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw CliError(kExitRuntime, "io", "cannot write '" + out_path + "'");
  os << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_grid(const std::string& text) {
  // "lo:hi:step" (inclusive) or a comma-separated list
  if (std::count(text.begin(), text.end(), ':') == 2) {
    std::stringstream ss(text);
    std::string lo_s, hi_s, step_s;
    std::getline(ss, lo_s, ':');
    std::getline(ss, hi_s, ':');
    std::getline(ss, step_s, ':');
    const double lo = std::stod(lo_s), hi = std::stod(hi_s), step = std::stod(step_s);
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    std::vector<double> out;
    for (std::int64_t i = 0;; ++i) {
      const double v = lo + static_cast<double>(i) * step;
      if (v > hi + 1e-9 * std::abs(step)) break;
      out.push_back(v);
    }
    return out;
  }
  return rkg::parse_double_list(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rkg - heterogeneous random key graphs: exact scaling math, sampling, couplings and "
               "Monte Carlo connectivity experiments",
                "rkg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rkg 1.0.0");

  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::int64_t trials = 1000;
  unsigned threads = 0;
  std::string vary;
  std::string values;
  std::string direction;
  std::optional<double> beta;
  double target_beta = 0.0;
  std::int64_t p_cap = std::int64_t{1} << 40;
  std::string plot_script;
  std::string in_path;
  bool linear_scan = false;

  ParamFlags pf;
  auto* validate_cmd = app.add_subcommand("validate", "Check model parameters and list every violation");
  pf.attach(validate_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Exact edge probabilities, b_i, beta_n and condition flags (JSON)");
  pf.attach(analyze_cmd);
  analyze_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  auto* sample_cmd = app.add_subcommand("sample", "Draw one graph realization in the rkg-sample text format");
  pf.attach(sample_cmd);
  sample_cmd->add_option("--seed", seed, "Master seed");
  sample_cmd->add_option("--stream", stream, "Stream id under the master seed");
  sample_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  auto* analyze_sample_cmd = app.add_subcommand("analyze-sample", "Components and isolated nodes of a sample file (JSON)");
  analyze_sample_cmd->add_option("--in", in_path, "Sample file in rkg-sample format")->required();
  analyze_sample_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  auto* simulate_cmd = app.add_subcommand("simulate", "Empirical connectivity probability for one parameter set");
  pf.attach(simulate_cmd);
  simulate_cmd->add_option("--trials", trials, "Independent samples (default 1000)");
  simulate_cmd->add_option("--seed", seed, "Master seed");
  simulate_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  simulate_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  simulate_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  auto* sweep_cmd = app.add_subcommand("sweep", "Connectivity probability across a grid of one parameter");
  pf.attach(sweep_cmd);
  sweep_cmd->add_option("--vary", vary, "Field to vary: n, P, a_<i> or K_<i> (1-based i)")->required();
  sweep_cmd->add_option("--values", values, "Grid: comma list or lo:hi:step (inclusive)")->required();
  sweep_cmd->add_option("--trials", trials, "Independent samples per grid point (default 1000)");
  sweep_cmd->add_option("--seed", seed, "Master seed");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--format", format, "Output format (default csv)")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
  sweep_cmd->add_option("--plot-script", plot_script, "Also write a gnuplot script for the CSV to this path");

  auto* threshold_cmd = app.add_subcommand("threshold", "Smallest/largest field value with b_1 >= (ln n + target)/n");
  pf.attach(threshold_cmd);
  threshold_cmd->add_option("--vary", vary, "Field to search: n, P or K_<i>")->required();
  threshold_cmd->add_option("--direction", direction, "min or max")->check(CLI::IsMember({"min", "max"}));
  threshold_cmd->add_option("--target-beta", target_beta, "Target beta (default 0)");
  threshold_cmd->add_option("--p-cap", p_cap, "Upper end of the search domain when varying P");
  threshold_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  auto* couple_cmd = app.add_subcommand("couple", "Supergraph (star) or subgraph (pound) coupling vector (JSON)");
  pf.attach(couple_cmd);
  couple_cmd->add_option("--direction", direction, "star or pound")->required()->check(CLI::IsMember({"star", "pound"}));
  couple_cmd->add_option("--beta", beta, "Override beta (default: computed from the parameters)");
  couple_cmd->add_flag("--linear-scan", linear_scan, "Use exhaustive scans instead of binary search");
  couple_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kExitUsage, "usage", e.what());
  }

  try {
    if (validate_cmd->parsed()) {
      const auto report = rkg::validate(pf.raw());
      std::cout << dump(rkg::to_json(report));
      if (!report.ok()) return report_error(kExitValidation, "validation", report.summary());
      return 0;
    }

    if (analyze_cmd->parsed()) {
      emit(out_path, dump(rkg::to_json(rkg::scaling_report(pf.build()))));
      return 0;
    }

    if (sample_cmd->parsed()) {
      const auto p = pf.build();
      const auto s = rkg::sample_graph(p, rkg::RngSeed{seed, stream});
      std::ostringstream os;
      rkg::write_sample(os, s, p);
      emit(out_path, os.str());
      return 0;
    }

    if (analyze_sample_cmd->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw CliError(kExitRuntime, "io", "cannot open sample file '" + in_path + "'");
      rkg::SampleFile file;
      try {
        file = rkg::read_sample(in);
      } catch (const std::invalid_argument& e) {
        throw CliError(kExitValidation, "validation", e.what());
      }
      auto j = rkg::to_json(rkg::components(file.sample));
      j["isolated"] = rkg::isolated_nodes(file.sample).isolated;
      emit(out_path, dump(j));
      return 0;
    }

    if (simulate_cmd->parsed()) {
      const auto p = pf.build();
      if (trials < 1) throw CliError(kExitUsage, "usage", "--trials must be at least 1");
      const auto row = rkg::run_trials(p, trials, seed, threads);
      if (format == "csv") {
        const std::vector<rkg::TrialAggregate> rows{row};
        emit(out_path, rkg::sweep_csv(rows));
      } else {
        emit(out_path, dump(rkg::to_json(row)));
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      rkg::SweepConfig cfg;
      cfg.base = pf.build();
      if (trials < 1) throw CliError(kExitUsage, "usage", "--trials must be at least 1");
      try {
        cfg.vary = rkg::VaryField::parse(vary);
        cfg.values = parse_grid(values);
      } catch (const std::exception& e) {
        throw CliError(kExitUsage, "usage", e.what());
      }
      if (cfg.vary.index >= cfg.base.m) throw CliError(kExitUsage, "usage", "--vary index exceeds m");
      cfg.trials = trials;
      cfg.master_seed = seed;
      cfg.threads = threads;
      const auto rows = rkg::sweep(cfg);
      if (sweep_cmd->count("--format") == 0 || format == "csv") {
        emit(out_path, rkg::sweep_csv(rows));
      } else {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back(rkg::to_json(r));
        emit(out_path, dump(j));
      }
      if (!plot_script.empty()) {
        std::ofstream os(plot_script, std::ios::binary);
        if (!os) throw CliError(kExitRuntime, "io", "cannot write '" + plot_script + "'");
        os << rkg::gnuplot_script(out_path.empty() ? "sweep.csv" : out_path, cfg.vary.name());
      }
      return 0;
    }

    if (threshold_cmd->parsed()) {
      const auto p = pf.build();
      rkg::VaryField field;
      try {
        field = rkg::VaryField::parse(vary);
      } catch (const std::exception& e) {
        throw CliError(kExitUsage, "usage", e.what());
      }
      if (field.kind == rkg::VaryField::Kind::a)
        throw CliError(kExitUsage, "usage", "threshold search supports n, P and K_<i> only");
      if (field.index >= p.m) throw CliError(kExitUsage, "usage", "--vary index exceeds m");
      rkg::ThresholdDirection dir = rkg::ThresholdDirection::min;
      if (direction.empty()) {
        dir = field.kind == rkg::VaryField::Kind::P ? rkg::ThresholdDirection::max : rkg::ThresholdDirection::min;
      } else if (direction == "max") {
        dir = rkg::ThresholdDirection::max;
      }
      rkg::ThresholdOptions opts;
      opts.target_beta = target_beta;
      opts.p_cap = p_cap;
      const auto r = rkg::find_threshold(p, field, dir, opts);
      emit(out_path, dump(rkg::to_json(r)));
      if (!r.value) return report_error(kExitRuntime, "out-of-range", "no crossing within the search domain");
      return 0;
    }

    if (couple_cmd->parsed()) {
      const auto p = pf.build();
      if (p.n < 3) throw CliError(kExitValidation, "validation", "couplings need n >= 3");
      rkg::SearchOptions opts{linear_scan};
      rkg::CouplingResult r;
      if (direction == "star")
        r = beta ? rkg::star_coupling(p, *beta, opts) : rkg::star_coupling(p, opts);
      else
        r = beta ? rkg::pound_coupling(p, *beta, opts) : rkg::pound_coupling(p, opts);
      emit(out_path, dump(rkg::to_json(r)));
      return 0;
    }
  } catch (const CliError& e) {
    return report_error(e.code, e.kind, e.what());
  } catch (const std::exception& e) {
    return report_error(kExitRuntime, "runtime", e.what());
  }
  return 0;
}
