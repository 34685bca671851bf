#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/measure.hpp"
#include "switchlab/stopped_law.hpp"

namespace switchlab {

/// SplitMix64. The reproducibility contract is the algorithm plus the
/// substream rule: trial i of a run with seed s uses a SplitMix64 stream
/// initialized with state s + (i+1) * 0x9E3779B97F4A7C15. Identical
/// (seed, trial) pairs produce identical streams on any implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static SplitMix64 substream(std::uint64_t seed, std::uint64_t trial) {
    return SplitMix64(seed + (trial + 1) * kGamma);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next_double() * n);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

/// Monte Carlo estimate with its standard error (sample sd / sqrt(n)) and,
/// when an exact target is supplied, the z-score against it.
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::optional<double> target;
  double z_score() const {
    if (!target) return 0.0;
    const double dev = estimate - *target;
    if (std_error == 0.0) return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return dev / std_error;
  }
};

/// Mean and SE of sampler(rng) over n substreams of the seed (Welford).
template <class Sampler>
McEstimate mc_estimate(Sampler&& sampler, std::uint64_t seed, std::uint64_t n,
                       std::optional<double> target = std::nullopt) {
  if (n < 1) throw Error("mc_estimate: need n >= 1");
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    SplitMix64 rng = SplitMix64::substream(seed, i);
    const double v = sampler(rng);
    const double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  McEstimate e;
  e.estimate = mean;
  e.n = n;
  e.seed = seed;
  e.target = target;
  e.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return e;
}

namespace detail {

/// Inverse-CDF sample from the atom map (deterministic: atoms iterate in
/// lexicographic site order).
template <class S, int D>
Point<D> sample_start(const LatticeMeasure<S, D>& lambda, SplitMix64& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  Point<D> last{};
  for (const auto& [p, w] : lambda.atoms()) {
    cum += scalar_traits<S>::to_double(w);
    last = p;
    if (u < cum) return p;
  }
  return last;
}

template <std::size_t N>
std::array<std::int64_t, N> step(const std::array<std::int64_t, N>& p, SplitMix64& rng) {
  const std::uint32_t dir = rng.next_below(static_cast<std::uint32_t>(2 * N));
  std::array<std::int64_t, N> q = p;
  q[dir / 2] += (dir % 2 == 0) ? 1 : -1;
  return q;
}

}  // namespace detail

/// One trajectory stopped per the barrier semantics; returns (stop time,
/// site). Finite horizon caps at T; infinite horizon runs to the a.s. finite
/// stop (with a large safety bound).
template <class S, int D>
std::pair<std::int64_t, Point<D>> sample_stopped_walk(const LatticeMeasure<S, D>& lambda,
                                                      const Barrier<D>& b, Horizon horizon,
                                                      SplitMix64& rng) {
  Point<D> pos = detail::sample_start(lambda, rng);
  const std::int64_t cap = horizon.is_finite() ? horizon.T() : (std::int64_t{1} << 32);
  for (std::int64_t t = 0;; ++t) {
    if (horizon.is_finite() && t == cap) return {t, pos};
    if (!b.is_continuation(t, pos)) return {t, pos};
    if (t > cap) throw Error("sample_stopped_walk: stop time exceeded safety bound");
    pos = detail::step(pos, rng);
  }
}

/// Empirical stopped law from n seeded trajectories; deterministic in
/// (seed, n). Joint weights are counts / n.
template <class S, int D>
StoppedLaw<double, D> simulate_stopped(const LatticeMeasure<S, D>& lambda, const Barrier<D>& b,
                                       Horizon horizon, std::uint64_t seed, std::uint64_t n) {
  if (n < 1) throw Error("simulate_stopped: need n >= 1");
  std::map<std::pair<std::int64_t, Point<D>>, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    SplitMix64 rng = SplitMix64::substream(seed, i);
    const auto [t, p] = sample_stopped_walk(lambda, b, horizon, rng);
    counts[{t, p}] += 1;
  }
  StoppedLaw<double, D> law;
  law.horizon = horizon;
  typename LatticeMeasure<double, D>::AtomMap exit;
  for (const auto& [key, c] : counts) {
    const double w = static_cast<double>(c) / static_cast<double>(n);
    law.joint[key] = w;
    exit[key.second] += w;
  }
  law.exit_law = LatticeMeasure<double, D>::unchecked(std::move(exit));
  law.residual = 1.0 - law.joint_mass();
  return law;
}

}  // namespace switchlab
