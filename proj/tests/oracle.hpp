#pragma once

// Test-only reference computations in exact arithmetic. Nothing here calls
// into the library's floating-point paths.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Float = boost::multiprecision::cpp_bin_float_50;

inline BigInt choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// C(P-A, B) / C(P, B) exactly.
inline Rational tail_ratio(std::int64_t P, std::int64_t A, std::int64_t B) {
  return Rational(choose(P - A, B), choose(P, B));
}

inline Rational edge_prob(std::int64_t P, std::int64_t ki, std::int64_t kj) {
  return 1 - tail_ratio(P, ki, kj);
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Counts intersecting ordered (ki-subset, kj-subset) pairs of [0, P) by
/// enumerating bitmasks. Only for small P.
inline Rational brute_force_edge_prob(int P, int ki, int kj) {
  std::vector<std::uint64_t> a, b;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << P); ++mask) {
    const int bits = __builtin_popcountll(mask);
    if (bits == ki) a.push_back(mask);
    if (bits == kj) b.push_back(mask);
  }
  std::uint64_t hits = 0;
  for (auto x : a)
    for (auto y : b) hits += (x & y) != 0;
  return Rational(BigInt(hits), BigInt(a.size() * b.size()));
}

inline Rational b1(std::int64_t P, const std::vector<Rational>& a, const std::vector<std::int64_t>& K) {
  Rational s = 0;
  for (std::size_t j = 0; j < K.size(); ++j) s += a[j] * edge_prob(P, K[0], K[j]);
  return s;
}

/// Exact rational for a decimal-entered probability: uses the double's exact
/// binary value, which is what the library sees.
inline Rational exact(double v) { return Rational(Float(v)); }

inline Float ln(std::int64_t n) { return boost::multiprecision::log(Float(n)); }

/// Threshold (ln n + beta~) / n for beta consistent with (a, K, P), with
/// beta~ = clamp side of beta. When beta~ equals beta the bound is b_1
/// itself, kept as an exact rational.
inline Rational consistent_bound(std::int64_t n, const Rational& b1_exact, bool pound) {
  const Float lnn = ln(n);
  const Float lnlnn = boost::multiprecision::log(lnn);
  const Float beta = Float(n) * Float(b1_exact) - lnn;
  if (pound) {
    if (beta <= lnlnn) return b1_exact;
    return Rational((lnn + lnlnn) / Float(n));
  }
  if (beta >= -lnlnn) return b1_exact;
  return Rational((lnn - lnlnn) / Float(n));
}

struct PoundTrace {
  std::int64_t T = 0;
  bool all_T = false;
  int ell = 0;
  std::vector<std::int64_t> Q;  // P + 1 when unreachable
  std::vector<std::int64_t> K_out;
};

/// Straight transcription of the pound construction with exhaustive scans
/// and exact comparisons.
inline PoundTrace pound(std::int64_t n, std::int64_t P, const std::vector<double>& a_in,
                        const std::vector<std::int64_t>& K) {
  std::vector<Rational> a;
  for (double v : a_in) a.push_back(exact(v));
  const int m = static_cast<int>(K.size());
  const Rational bound = consistent_bound(n, b1(P, a, K), true);

  PoundTrace t;
  t.T = -1;
  for (std::int64_t y = 0; y <= P; ++y)
    if (edge_prob(P, y, y) <= bound) t.T = y;
  if (t.T < 0) t.T = 0;

  if (K[0] >= t.T) {
    t.all_T = true;
    t.K_out.assign(m, t.T);
    return t;
  }
  while (t.ell < m && K[t.ell] <= t.T) ++t.ell;
  t.K_out.assign(K.begin(), K.begin() + t.ell);
  for (int j = t.ell; j < m; ++j) {
    std::int64_t q = P + 1;
    for (std::int64_t z = 0; z <= P; ++z) {
      std::vector<std::int64_t> v = t.K_out;
      v.push_back(z);
      v.insert(v.end(), K.begin() + j + 1, K.end());
      if (b1(P, a, v) >= bound) {
        q = z;
        break;
      }
    }
    t.Q.push_back(q);
    if (q > P) {
      t.K_out.insert(t.K_out.end(), K.begin() + j, K.end());
      break;
    }
    if (q > t.T) {
      t.K_out.push_back(q);
      t.K_out.insert(t.K_out.end(), K.begin() + j + 1, K.end());
      break;
    }
    t.K_out.push_back(t.T);
  }
  return t;
}

/// Largest X in [0, P] with b_1(K with K_m := X) <= bound; nullopt if none.
inline std::optional<std::int64_t> star_last(std::int64_t n, std::int64_t P, const std::vector<double>& a_in,
                                             const std::vector<std::int64_t>& K) {
  std::vector<Rational> a;
  for (double v : a_in) a.push_back(exact(v));
  const Rational bound = consistent_bound(n, b1(P, a, K), false);
  std::optional<std::int64_t> best;
  for (std::int64_t x = 0; x <= P; ++x) {
    auto v = K;
    v.back() = x;
    if (b1(P, a, v) <= bound) best = x;
  }
  return best;
}

}  // namespace oracle
