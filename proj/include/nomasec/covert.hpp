// Copyright 2026 the nomasec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/math/special_functions/gamma.hpp>
#include <cstdint>
#include <vector>

#include "nomasec/common.hpp"
#include "nomasec/parallel.hpp"
#include "nomasec/rng.hpp"

namespace nomasec {

/// Radiometer (energy) detection statistic: average received power over a
/// block of complex baseband samples.
inline double radiometer_stat(const std::vector<cplx>& samples) {
  detail::require(!samples.empty(), "samples must be nonempty");
  double acc = 0.0;
  for (const cplx& y : samples) acc += std::norm(y);
  return acc / static_cast<double>(samples.size());
}

/// Binary hypothesis test seen by a warden: under H0 the received samples
/// are circular Gaussian noise of power `noise_power`; under H1 an
/// additional covert signal of average power `signal_power` is present, so
/// the per-sample power rises to noise_power + signal_power.
struct HypothesisScenario {
  double noise_power;
  double signal_power;

  void validate() const {
    detail::require_positive(noise_power, "noise_power");
    detail::require_positive(signal_power, "signal_power");
  }
  double h1_power() const { return noise_power + signal_power; }
};

/// Exact radiometer error probabilities for Gaussian signalling. With n
/// samples the scaled statistic n*T/sigma^2 is Gamma(n, 1) under either
/// hypothesis, so both tails reduce to regularized incomplete gamma
/// functions.
struct DetectionProbabilities {
  double p_false_alarm;
  double p_missed_detection;
  double total_error() const { return p_false_alarm + p_missed_detection; }
};

inline DetectionProbabilities detection_oracle_gaussian(
    const HypothesisScenario& scenario, double threshold, std::uint64_t n) {
  scenario.validate();
  detail::require(n > 0, "n must be >= 1");
  detail::require_positive(threshold, "threshold");
  const double a = static_cast<double>(n);
  const double p_fa =
      boost::math::gamma_q(a, a * threshold / scenario.noise_power);
  const double p_md =
      boost::math::gamma_p(a, a * threshold / scenario.h1_power());
  return DetectionProbabilities{p_fa, p_md};
}

/// Threshold at which the oracle false-alarm probability equals `p_fa`.
inline double threshold_for_false_alarm(const HypothesisScenario& scenario,
                                        double p_fa, std::uint64_t n) {
  scenario.validate();
  detail::require(n > 0, "n must be >= 1");
  detail::require(p_fa > 0.0 && p_fa < 1.0, "p_fa must be in (0, 1)");
  const double a = static_cast<double>(n);
  return scenario.noise_power * boost::math::gamma_q_inv(a, p_fa) / a;
}

struct DetectionEstimate {
  double p_false_alarm;
  double fa_std_error;
  double p_missed_detection;
  double md_std_error;
  std::uint64_t trials;
  std::uint64_t seed;
};

/// Monte Carlo radiometer performance: each trial draws one n-sample block
/// under H0 and one under H1 and thresholds the average power. Bit-identical
/// for any worker count.
inline DetectionEstimate simulate_detection(const HypothesisScenario& scenario,
                                            double threshold, std::uint64_t n,
                                            std::uint64_t trials,
                                            std::uint64_t seed,
                                            unsigned workers = 0) {
  scenario.validate();
  detail::require(n > 0, "n must be >= 1");
  detail::require_positive(threshold, "threshold");
  detail::require(trials > 0, "trials must be >= 1");

  struct Counts {
    std::uint64_t false_alarms = 0;
    std::uint64_t missed = 0;
  };
  auto chunk_fn = [&](std::uint64_t first, std::uint64_t count) {
    Counts counts;
    for (std::uint64_t t = first; t < first + count; ++t) {
      TrialRng rng = derive_trial_rng(seed, t);
      double stat0 = 0.0;
      for (std::uint64_t k = 0; k < n; ++k) {
        stat0 += std::norm(complex_normal(rng, scenario.noise_power));
      }
      double stat1 = 0.0;
      for (std::uint64_t k = 0; k < n; ++k) {
        stat1 += std::norm(complex_normal(rng, scenario.h1_power()));
      }
      const double inv_n = 1.0 / static_cast<double>(n);
      if (stat0 * inv_n > threshold) ++counts.false_alarms;
      if (stat1 * inv_n <= threshold) ++counts.missed;
    }
    return counts;
  };
  auto fold = [](Counts& acc, const Counts& c) {
    acc.false_alarms += c.false_alarms;
    acc.missed += c.missed;
  };

  const Counts total =
      run_chunked<Counts>(trials, workers, Counts{}, chunk_fn, fold);
  const double p_fa =
      static_cast<double>(total.false_alarms) / static_cast<double>(trials);
  const double p_md =
      static_cast<double>(total.missed) / static_cast<double>(trials);
  return DetectionEstimate{p_fa,
                           proportion_std_error(p_fa, trials),
                           p_md,
                           proportion_std_error(p_md, trials),
                           trials,
                           seed};
}

/// Best radiometer operating point: minimizes P_FA + P_MD over a 200-point
/// logarithmic threshold grid spanning [noise/10, 10*(noise+signal)].
struct MinErrorReport {
  double threshold;
  double total_error;
  double p_false_alarm;
  double p_missed_detection;
};

inline MinErrorReport min_error_detection(const HypothesisScenario& scenario,
                                          std::uint64_t n) {
  scenario.validate();
  detail::require(n > 0, "n must be >= 1");
  constexpr int kGridPoints = 200;
  const double lo = scenario.noise_power / 10.0;
  const double hi = 10.0 * scenario.h1_power();
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (kGridPoints - 1);

  MinErrorReport best{lo, 2.0, 1.0, 1.0};
  for (int i = 0; i < kGridPoints; ++i) {
    const double gamma = std::exp(log_lo + step * i);
    const DetectionProbabilities probs =
        detection_oracle_gaussian(scenario, gamma, n);
    if (probs.total_error() < best.total_error) {
      best = MinErrorReport{gamma, probs.total_error(), probs.p_false_alarm,
                            probs.p_missed_detection};
    }
  }
  return best;
}

/// Per-sample Kullback-Leibler divergence D(H0 || H1) between the two
/// received distributions (circular Gaussians differing only in power):
///   D = ln(s1/s0) + s0/s1 - 1   with s0 = noise, s1 = noise + signal.
inline double kl_divergence_per_sample(const HypothesisScenario& scenario) {
  scenario.validate();
  const double ratio = scenario.h1_power() / scenario.noise_power;
  return std::log(ratio) + 1.0 / ratio - 1.0;
}

/// Information-theoretic lower bound on the total detection error of ANY
/// detector observing n samples, via Pinsker's inequality:
///   P_FA + P_MD >= 1 - sqrt(n * D / 2), clamped at zero.
inline double pinsker_error_lower_bound(const HypothesisScenario& scenario,
                                        std::uint64_t n) {
  detail::require(n > 0, "n must be >= 1");
  const double d = kl_divergence_per_sample(scenario);
  return std::max(0.0, 1.0 - std::sqrt(static_cast<double>(n) * d / 2.0));
}

}  // namespace nomasec
