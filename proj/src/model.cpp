#include "rkg/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rkg {

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
    if (v.index) out += " (index " + std::to_string(*v.index) + ")";
  }
  return out;
}

ValidationReport validate(const ModelParams& p) {
  ValidationReport report;
  auto add = [&](std::string code, std::string msg, std::optional<int> idx = std::nullopt) {
    report.violations.push_back({std::move(code), std::move(msg), idx});
  };

  if (p.n < 2) add("n_too_small", "n must be at least 2");
  if (p.m < 1) add("m_too_small", "m must be at least 1");
  if (p.P < 1) add("P_too_small", "P must be at least 1");
  if (p.m >= 1 && static_cast<int>(p.a.size()) != p.m)
    add("a_length", "a has " + std::to_string(p.a.size()) + " entries, expected m = " + std::to_string(p.m));
  if (p.m >= 1 && static_cast<int>(p.K.size()) != p.m)
    add("K_length", "K has " + std::to_string(p.K.size()) + " entries, expected m = " + std::to_string(p.m));

  double sum = 0.0;
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    if (!(p.a[i] > 0.0) || !std::isfinite(p.a[i]))
      add("a_not_positive", "a entry not positive", static_cast<int>(i));
    sum += p.a[i];
  }
  if (!p.a.empty() && !(std::abs(sum - 1.0) <= kProbabilitySumTolerance))
    add("a_sum", "a does not sum to 1");

  for (std::size_t i = 0; i < p.K.size(); ++i) {
    if (p.K[i] < 1) add("K_too_small", "K entry below 1", static_cast<int>(i));
    if (p.P >= 1 && p.K[i] > p.P) add("K_exceeds_P", "K entry exceeds P", static_cast<int>(i));
  }
  for (std::size_t i = 1; i < p.K.size(); ++i) {
    if (p.K[i] < p.K[i - 1]) {
      add("K_not_sorted", "K not sorted", static_cast<int>(i));
      break;
    }
  }
  return report;
}

void require_valid(const ModelParams& params) {
  auto report = validate(params);
  if (!report.ok()) throw std::invalid_argument(report.summary());
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngSeed derive_stream(const RngSeed& seed, std::uint64_t trial_index) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  const std::uint64_t base = mix64(seed.master_seed ^ mix64(seed.stream_id));
  return {seed.master_seed, mix64(base + (trial_index + 1) * kGolden)};
}

namespace {
std::mt19937_64 make_engine(const RngSeed& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                    static_cast<std::uint32_t>(seed.master_seed >> 32),
                    static_cast<std::uint32_t>(seed.stream_id),
                    static_cast<std::uint32_t>(seed.stream_id >> 32)};
  return std::mt19937_64(seq);
}
}  // namespace

Rng::Rng(const RngSeed& seed) : engine_(make_engine(seed)) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace rkg
