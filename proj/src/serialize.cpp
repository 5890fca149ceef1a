#include "rkg/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rkg {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) { return parse_list<double>(text); }
std::vector<std::int64_t> parse_int_list(const std::string& text) { return parse_list<std::int64_t>(text); }

ModelParams params_from_config(const std::string& text) {
  ModelParams p;
  bool have_n = false, have_P = false, have_a = false, have_K = false, have_m = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      p.n = parse_number<std::int64_t>(value);
      have_n = true;
    } else if (key == "P") {
      p.P = parse_number<std::int64_t>(value);
      have_P = true;
    } else if (key == "m") {
      p.m = parse_number<int>(value);
      have_m = true;
    } else if (key == "a") {
      p.a = parse_double_list(value);
      have_a = true;
    } else if (key == "K") {
      p.K = parse_int_list(value);
      have_K = true;
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!(have_n && have_P && have_a && have_K)) throw std::invalid_argument("config needs n, P, a and K");
  if (!have_m) p.m = static_cast<int>(p.K.size());
  return p;
}

std::string params_to_config(const ModelParams& p) {
  std::ostringstream os;
  os << "n = " << p.n << "\nm = " << p.m << "\nP = " << p.P << "\na = ";
  for (std::size_t i = 0; i < p.a.size(); ++i) os << (i ? "," : "") << format_double(p.a[i]);
  os << "\nK = ";
  for (std::size_t i = 0; i < p.K.size(); ++i) os << (i ? "," : "") << p.K[i];
  os << '\n';
  return os.str();
}

json to_json(const ModelParams& p) {
  return {{"n", p.n}, {"m", p.m}, {"P", p.P}, {"a", p.a}, {"K", p.K}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.n = j.at("n").get<std::int64_t>();
  p.P = j.at("P").get<std::int64_t>();
  p.a = j.at("a").get<std::vector<double>>();
  p.K = j.at("K").get<std::vector<std::int64_t>>();
  p.m = j.contains("m") ? j.at("m").get<int>() : static_cast<int>(p.K.size());
  return p;
}

json to_json(const ValidationReport& report) {
  json v = json::array();
  for (const auto& x : report.violations) {
    json item = {{"code", x.code}, {"message", x.message}};
    // 1-based, like every other user-facing index.
    if (x.index) item["index"] = *x.index + 1;
    v.push_back(item);
  }
  return {{"ok", report.ok()}, {"violations", v}};
}

namespace {

json matrix_json(const Eigen::MatrixXd& mat) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json to_json(const ScalingReport& r) {
  json b = json::array();
  for (Eigen::Index i = 0; i < r.b.size(); ++i) b.push_back(r.b(i));
  return {{"p", matrix_json(r.p)},
          {"b", b},
          {"b1", r.b1},
          {"beta_n", r.beta_n},
          {"approx_p", matrix_json(r.approx_p)},
          {"flags",
           {{"P_ge_n", r.flags.pool_at_least_n},
            {"K1_ge_sqrt_P_over_n", r.flags.k_min_above_sqrt_p_over_n},
            {"Km_le_sqrt_P", r.flags.k_max_below_sqrt_p},
            {"K_sorted", r.flags.k_sorted},
            {"many_groups", r.flags.many_groups},
            {"advisory", true}}}};
}

json to_json(const ComponentSummary& s) {
  return {{"num_components", s.num_components},
          {"component_sizes", s.component_sizes},
          {"is_connected", s.is_connected},
          {"J_n", s.J_n},
          {"I_n", s.I_n}};
}

json to_json(const CouplingResult& r) {
  json j = {{"direction", to_string(r.direction)},
            {"K_in", r.K_in},
            {"K_out", r.K_out},
            {"beta", r.beta},
            {"beta_overridden", r.beta_overridden},
            {"in_regime", r.in_regime},
            {"beta_tilde", r.beta_tilde},
            {"bound", r.bound},
            {"bound_is_b1", r.bound_is_b1},
            {"beta_out", r.beta_out},
            {"infeasible", r.infeasible}};
  if (r.direction == CouplingDirection::pound) {
    j["T_n"] = r.T_n.value;
    j["T_n_negative_bound"] = r.T_n.negative_bound;
    j["all_Tn_branch"] = r.all_Tn_branch;
    j["ell"] = r.ell;
    json q = json::array();
    for (const auto& s : r.Q)
      q.push_back({{"j", s.group + 1}, {"Q", s.value}, {"infeasible", s.infeasible}, {"above_Tn", s.above_Tn}});
    j["Q"] = q;
  }
  json w = json::array();
  for (const auto& x : r.witnesses) {
    json item = {{"name", x.name}, {"value", x.value}, {"lhs", x.lhs}, {"bound", x.bound}};
    item["neighbor"] = x.neighbor ? json(*x.neighbor) : json(nullptr);
    item["neighbor_lhs"] = x.neighbor_lhs ? json(*x.neighbor_lhs) : json(nullptr);
    w.push_back(item);
  }
  j["witnesses"] = w;
  json c = json::array();
  for (const auto& x : r.checks) c.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
  j["checks"] = c;
  j["all_checks_pass"] = r.all_checks_pass();
  return j;
}

json to_json(const TrialAggregate& r) {
  json j = {{"vary", r.vary},
            {"param_value", r.param_value},
            {"params", to_json(r.params)},
            {"valid", r.valid},
            {"trials", r.trials}};
  if (!r.valid) {
    j["invalid_reason"] = r.invalid_reason;
    return j;
  }
  j.update({{"connected_count", r.connected_count},
            {"connected_prob", r.connected_prob},
            {"ci_low", r.ci_low},
            {"ci_high", r.ci_high},
            {"mean_Jn", r.mean_Jn},
            {"mean_In", r.mean_In},
            {"mean_components", r.mean_components},
            {"b1", r.b1},
            {"beta_n", r.beta_n},
            {"threshold_flag", r.threshold_flag}});
  return j;
}

json to_json(const ThresholdResult& r) {
  json j = {{"found", r.value.has_value()},
            {"domain", {r.domain_lo, r.domain_hi}},
            {"target_bound", r.target_bound}};
  if (r.value) {
    j["value"] = *r.value;
    j["b1"] = r.b1_at_value;
    j["beta"] = r.beta_at_value;
    j["neighbor"] = r.neighbor ? json(*r.neighbor) : json(nullptr);
    j["b1_at_neighbor"] = r.b1_at_neighbor ? json(*r.b1_at_neighbor) : json(nullptr);
  } else {
    j["error"] = "out-of-range";
  }
  return j;
}

void write_sample(std::ostream& os, const GraphSample& sample, const ModelParams& params) {
  os << "rkg-sample v1 n=" << sample.size() << " m=" << params.m << " P=" << params.P << '\n';
  for (std::size_t x = 0; x < sample.size(); ++x) {
    os << x << ' ' << sample.groups[x] + 1;
    for (KeyId k : sample.rings[x]) os << ' ' << k;
    os << '\n';
  }
}

SampleFile read_sample(std::istream& is) {
  SampleFile f;
  std::string line;
  do {
    if (!std::getline(is, line)) throw std::invalid_argument("sample file: missing header");
  } while (trim(line).empty() || trim(line)[0] == '#');

  std::istringstream header(line);
  std::string magic, version, tn, tm, tP;
  header >> magic >> version >> tn >> tm >> tP;
  if (magic != "rkg-sample" || version != "v1" || tn.rfind("n=", 0) != 0 || tm.rfind("m=", 0) != 0 ||
      tP.rfind("P=", 0) != 0)
    throw std::invalid_argument("sample file: bad header '" + line + "'");
  f.n = parse_number<std::int64_t>(tn.substr(2));
  f.m = parse_number<int>(tm.substr(2));
  f.P = parse_number<std::int64_t>(tP.substr(2));
  if (f.n < 0 || f.m < 1 || f.P < 1) throw std::invalid_argument("sample file: bad header values");

  f.sample.groups.reserve(static_cast<std::size_t>(f.n));
  f.sample.rings.reserve(static_cast<std::size_t>(f.n));
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::int64_t node = -1;
    int group = 0;
    if (!(ls >> node >> group)) throw std::invalid_argument("sample file: bad node line '" + t + "'");
    if (node != static_cast<std::int64_t>(f.sample.size()))
      throw std::invalid_argument("sample file: node ids must be 0, 1, 2, ... in order");
    if (group < 1 || group > f.m) throw std::invalid_argument("sample file: group out of range on node " + std::to_string(node));
    std::vector<KeyId> ring;
    KeyId k;
    while (ls >> k) {
      if (k < 0 || k >= f.P) throw std::invalid_argument("sample file: key id out of range on node " + std::to_string(node));
      if (!ring.empty() && k <= ring.back())
        throw std::invalid_argument("sample file: ring not sorted/distinct on node " + std::to_string(node));
      ring.push_back(k);
    }
    if (!ls.eof()) throw std::invalid_argument("sample file: bad key id on node " + std::to_string(node));
    f.sample.groups.push_back(group - 1);
    f.sample.rings.push_back(std::move(ring));
  }
  if (static_cast<std::int64_t>(f.sample.size()) != f.n)
    throw std::invalid_argument("sample file: header says n=" + std::to_string(f.n) + " but found " +
                                std::to_string(f.sample.size()) + " nodes");
  return f;
}

}  // namespace rkg
