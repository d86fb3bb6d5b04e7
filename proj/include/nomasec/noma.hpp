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

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nomasec/channel.hpp"
#include "nomasec/common.hpp"
#include "nomasec/parallel.hpp"
#include "nomasec/rng.hpp"

namespace nomasec {

// ---------------------------------------------------------------------------
// Core types
// ---------------------------------------------------------------------------

/// Per-user power shares of the superposed downlink signal. Shares are
/// nonnegative and must not exceed unit total power.
struct PowerAllocation {
  double alpha1;
  double alpha2;

  void validate() const {
    detail::require_nonnegative(alpha1, "alpha1");
    detail::require_nonnegative(alpha2, "alpha2");
    detail::require(alpha1 + alpha2 <= 1.0 + 1e-12,
                    "alpha1 + alpha2 must not exceed 1");
  }
};

/// Per-user target rates [bit/s/Hz] and the matching SINR thresholds.
struct TargetRates {
  double rate1_bits;
  double rate2_bits;

  void validate() const {
    detail::require_nonnegative(rate1_bits, "rate1_bits");
    detail::require_nonnegative(rate2_bits, "rate2_bits");
  }

  double gamma1() const { return sinr_threshold(rate1_bits); }
  double gamma2() const { return sinr_threshold(rate2_bits); }
};

/// Superposition-coded downlink symbol sqrt(alpha1) s1 + sqrt(alpha2) s2.
inline cplx superpose(cplx s1, cplx s2, const PowerAllocation& pa) {
  pa.validate();
  return std::sqrt(pa.alpha1) * s1 + std::sqrt(pa.alpha2) * s2;
}

/// Rate triple for the instantaneous-CSI ordering with user 1 the stronger
/// receiver (|h1|^2 >= |h2|^2, enforced). Noise is normalised to 1 and rho is
/// the transmit SNR:
///   strong_decodes_weak: log2(1 + a2 g1 / (a1 g1 + 1/rho))   (SIC stage 1)
///   strong_own:          log2(1 + a1 rho g1)                 (after SIC)
///   weak_own:            log2(1 + a2 rho g2)
struct RateTriple {
  double strong_decodes_weak;
  double strong_own;
  double weak_own;
};

inline RateTriple achievable_rates_csi(double gain1, double gain2, double rho,
                                       const PowerAllocation& pa) {
  detail::require_nonnegative(gain1, "gain1");
  detail::require_nonnegative(gain2, "gain2");
  detail::require_positive(rho, "rho");
  detail::require(gain1 >= gain2, "gain1 must be >= gain2 (caller orders)");
  pa.validate();
  const double inv_rho = 1.0 / rho;
  return RateTriple{
      rate_bits(pa.alpha2 * gain1 / (pa.alpha1 * gain1 + inv_rho)),
      rate_bits(pa.alpha1 * rho * gain1),
      rate_bits(pa.alpha2 * rho * gain2),
  };
}

/// Cognitive-radio style admission: the secondary user is served only when
/// the primary's rate log2(1 + g1 / (g2 + 1/rho)) still meets its target.
/// When admitted the secondary decodes interference-free: log2(1 + rho g2).
struct QosAdmission {
  bool admitted;
  double primary_rate_bits;
  double secondary_rate_bits;
};

inline QosAdmission qos_admission(double primary_gain, double secondary_gain,
                                  double rho, double primary_target_bits) {
  detail::require_nonnegative(primary_gain, "primary_gain");
  detail::require_nonnegative(secondary_gain, "secondary_gain");
  detail::require_positive(rho, "rho");
  detail::require_nonnegative(primary_target_bits, "primary_target_bits");
  const double primary_rate =
      rate_bits(primary_gain / (secondary_gain + 1.0 / rho));
  const bool admitted = primary_rate >= primary_target_bits;
  return QosAdmission{admitted, primary_rate,
                      admitted ? rate_bits(rho * secondary_gain) : 0.0};
}

/// Secondary-user grouping threshold tau = max{0, g0/(2^R0 - 1) - 1/rho}
/// protecting a primary with gain g0 and target R0. A secondary with gain
/// strictly above tau makes the primary-first decode infeasible and is
/// placed in the Strong group. Edge rules: R0 = 0 gives tau = +inf (every
/// user Weak); tau = 0 places every user in Strong.
struct HybridGrouping {
  double tau;
  std::vector<bool> strong;
};

inline double hybrid_threshold(double primary_gain, double primary_target_bits,
                               double rho) {
  detail::require_nonnegative(primary_gain, "primary_gain");
  detail::require_nonnegative(primary_target_bits, "primary_target_bits");
  detail::require_positive(rho, "rho");
  if (primary_target_bits == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(0.0,
                  primary_gain / sinr_threshold(primary_target_bits) - 1.0 / rho);
}

inline HybridGrouping hybrid_threshold_and_group(
    double primary_gain, double primary_target_bits, double rho,
    const std::vector<double>& secondary_gains) {
  const double tau = hybrid_threshold(primary_gain, primary_target_bits, rho);
  HybridGrouping grouping{tau, std::vector<bool>(secondary_gains.size())};
  for (std::size_t i = 0; i < secondary_gains.size(); ++i) {
    detail::require_nonnegative(secondary_gains[i], "secondary_gain");
    grouping.strong[i] = (tau == 0.0) || (secondary_gains[i] > tau);
  }
  return grouping;
}

// ---------------------------------------------------------------------------
// Decoding-order strategies
// ---------------------------------------------------------------------------

enum class DecodingStrategy {
  FixedCsiOrder,        // order by instantaneous gains each realization
  StatisticalCsiOrder,  // order by link distance (statistical CSI only)
  QosCr,                // cognitive-radio style: primary signal first
  HybridCsiQos,         // grouping threshold switches the order per trial
  PaDosHuf,             // high-rate user's signal first, alpha to that user
  PaDosLuf,             // low-rate user's signal first, alpha to that user
};

inline const char* to_string(DecodingStrategy s) {
  switch (s) {
    case DecodingStrategy::FixedCsiOrder: return "fixed_csi";
    case DecodingStrategy::StatisticalCsiOrder: return "statistical_csi";
    case DecodingStrategy::QosCr: return "qos_cr";
    case DecodingStrategy::HybridCsiQos: return "hybrid_csi_qos";
    case DecodingStrategy::PaDosHuf: return "pa_dos_huf";
    case DecodingStrategy::PaDosLuf: return "pa_dos_luf";
  }
  throw std::invalid_argument("unknown strategy");
}

/// Decode order of the weak group under the hybrid strategy.
enum class HybridWeakOrder { PrimaryFirst, SecondaryFirst };

/// Strategy-level knobs shared by the outage engine.
///   power_coefficient: share given to the first-decoded signal (baselines).
///   pa_dos_alpha:      share given to the designated user under PA-DOS;
///                      must exceed 0.5.
struct StrategyPolicy {
  double power_coefficient = 0.7;
  double pa_dos_alpha = 0.7;
  HybridWeakOrder hybrid_weak_order = HybridWeakOrder::PrimaryFirst;

  void validate() const {
    detail::require(std::isfinite(power_coefficient) &&
                        power_coefficient > 0.0 && power_coefficient < 1.0,
                    "power_coefficient must lie in (0, 1)");
    detail::require(std::isfinite(pa_dos_alpha) && pa_dos_alpha > 0.5 &&
                        pa_dos_alpha < 1.0,
                    "pa_dos_alpha must lie in (0.5, 1)");
  }
};

/// One two-user channel realization. Distances are consumed only by
/// StatisticalCsiOrder and may be NaN otherwise.
struct ChannelRealization {
  double gain1;
  double gain2;
  double distance1_m = std::numeric_limits<double>::quiet_NaN();
  double distance2_m = std::numeric_limits<double>::quiet_NaN();
};

/// Resolved decode plan for one realization: which signal every receiver
/// decodes first, the per-user power shares, and whether each user may
/// instead pick its own order locally (PA-DOS receiver-side selection).
struct StrategyDecision {
  int first_signal;  // 1 or 2
  PowerAllocation allocation;
  bool per_user_order_selection;
};

inline StrategyDecision strategy_order(DecodingStrategy strategy,
                                       const ChannelRealization& ch,
                                       const TargetRates& targets,
                                       const StrategyPolicy& policy,
                                       double rho) {
  detail::require_nonnegative(ch.gain1, "gain1");
  detail::require_nonnegative(ch.gain2, "gain2");
  detail::require_positive(rho, "rho");
  targets.validate();
  policy.validate();

  const double a = policy.power_coefficient;
  auto first_gets_share = [&](int first_signal) {
    return StrategyDecision{
        first_signal,
        first_signal == 1 ? PowerAllocation{a, 1.0 - a}
                          : PowerAllocation{1.0 - a, a},
        false};
  };

  switch (strategy) {
    case DecodingStrategy::FixedCsiOrder:
      // Instantaneous-weak user's signal first (carries the larger share);
      // ties keep user 1 as the strong receiver.
      return first_gets_share(ch.gain1 >= ch.gain2 ? 2 : 1);
    case DecodingStrategy::StatisticalCsiOrder: {
      detail::require(std::isfinite(ch.distance1_m) &&
                          std::isfinite(ch.distance2_m),
                      "statistical_csi needs link distances");
      // Farther (statistically weak) user's signal first; ties keep user 1
      // as the strong receiver.
      return first_gets_share(ch.distance1_m > ch.distance2_m ? 1 : 2);
    }
    case DecodingStrategy::QosCr:
      // Primary (user 1) decoded first everywhere.
      return first_gets_share(1);
    case DecodingStrategy::HybridCsiQos: {
      // User 1 is the protected primary; user 2's group decides the order.
      const double tau = hybrid_threshold(ch.gain1, targets.rate1_bits, rho);
      const bool strong = (tau == 0.0) || (ch.gain2 > tau);
      if (strong) return first_gets_share(2);
      return first_gets_share(
          policy.hybrid_weak_order == HybridWeakOrder::PrimaryFirst ? 1 : 2);
    }
    case DecodingStrategy::PaDosHuf:
    case DecodingStrategy::PaDosLuf: {
      // High-rate user by target rate; ties treat user 1 as high-rate.
      const int high = targets.rate1_bits >= targets.rate2_bits ? 1 : 2;
      const int designated =
          strategy == DecodingStrategy::PaDosHuf ? high : 3 - high;
      const double ad = policy.pa_dos_alpha;
      return StrategyDecision{
          designated,
          designated == 1 ? PowerAllocation{ad, 1.0 - ad}
                          : PowerAllocation{1.0 - ad, ad},
          true};
    }
  }
  throw std::invalid_argument("unknown strategy");
}

// ---------------------------------------------------------------------------
// Common outage
// ---------------------------------------------------------------------------

namespace detail {

/// SINR of the first-decoded signal (share a_first) observed at a receiver
/// with gain g while the remaining share is still unsubtracted interference.
inline double sinr_first_decoded(double a_first, double g, double inv_rho) {
  return a_first * g / ((1.0 - a_first) * g + inv_rho);
}

/// Outage under a global decode order: the owner of the first signal decodes
/// it under interference; the other user must first decode that signal at
/// its target (SIC gate) and then gets its own signal interference-free. A
/// failed gate zeroes the later-stage rate, which still meets a zero target.
inline bool fixed_order_outage(int first_signal, double a_first, double g1,
                               double g2, double rho, double gamma1,
                               double gamma2) {
  const double inv_rho = 1.0 / rho;
  const double gf = first_signal == 1 ? g1 : g2;
  const double gs = first_signal == 1 ? g2 : g1;
  const double gamma_f = first_signal == 1 ? gamma1 : gamma2;
  const double gamma_s = first_signal == 1 ? gamma2 : gamma1;
  const bool owner_ok = sinr_first_decoded(a_first, gf, inv_rho) >= gamma_f;
  const bool gate_ok = sinr_first_decoded(a_first, gs, inv_rho) >= gamma_f;
  const bool sic_ok =
      gamma_s == 0.0 ||
      (gate_ok && (1.0 - a_first) * rho * gs >= gamma_s);
  return !(owner_ok && sic_ok);
}

/// Receiver-side order selection for one user: succeed by decoding its own
/// signal directly (other signal as noise), or by subtracting the other
/// signal first (decodable at that signal's target) and then decoding its
/// own interference-free.
inline bool user_ok_adaptive(double g, double gamma_own, double gamma_other,
                             double a_own, double rho) {
  const double inv_rho = 1.0 / rho;
  const double a_other = 1.0 - a_own;
  const bool direct = a_own * g / (a_other * g + inv_rho) >= gamma_own;
  if (direct) return true;
  const bool gate = a_other * g / (a_own * g + inv_rho) >= gamma_other;
  return gate && a_own * rho * g >= gamma_own;
}

inline bool common_outage_trial(DecodingStrategy strategy,
                                const ChannelRealization& ch,
                                const TargetRates& targets,
                                const StrategyPolicy& policy, double rho,
                                double gamma1, double gamma2) {
  const StrategyDecision d =
      strategy_order(strategy, ch, targets, policy, rho);
  if (d.per_user_order_selection) {
    const bool ok1 =
        user_ok_adaptive(ch.gain1, gamma1, gamma2, d.allocation.alpha1, rho);
    const bool ok2 =
        user_ok_adaptive(ch.gain2, gamma2, gamma1, d.allocation.alpha2, rho);
    return !(ok1 && ok2);
  }
  const double a_first =
      d.first_signal == 1 ? d.allocation.alpha1 : d.allocation.alpha2;
  return fixed_order_outage(d.first_signal, a_first, ch.gain1, ch.gain2, rho,
                            gamma1, gamma2);
}

}  // namespace detail

/// Monte Carlo estimate of a common outage probability.
struct OutageEstimate {
  double probability;
  double std_error;
  std::uint64_t trials;
  std::uint64_t seed;
};

/// Two-user downlink scenario for the outage engine. Mean powers are the
/// Rayleigh E[|h|^2] per user; distances feed StatisticalCsiOrder.
struct OutageScenario {
  double mean_power1;
  double mean_power2;
  double distance1_m = std::numeric_limits<double>::quiet_NaN();
  double distance2_m = std::numeric_limits<double>::quiet_NaN();
  TargetRates targets{};
  StrategyPolicy policy{};

  static OutageScenario from_geometry(const LinkGeometry& user1,
                                      const LinkGeometry& user2,
                                      const TargetRates& targets,
                                      const StrategyPolicy& policy = {}) {
    return OutageScenario{user1.mean_power(), user2.mean_power(),
                          user1.distance_m, user2.distance_m, targets, policy};
  }

  void validate() const {
    detail::require_nonnegative(mean_power1, "mean_power1");
    detail::require_nonnegative(mean_power2, "mean_power2");
    targets.validate();
    policy.validate();
  }
};

/// Estimates the common outage probability (fraction of realizations where
/// any user misses its target, with SIC success gating) for every requested
/// strategy at every transmit SNR, sharing the channel draw of each trial
/// across strategies and SNR points. Result is indexed [strategy][snr].
///
/// Determinism: per-trial streams depend only on (seed, trial index) and the
/// integer outage counts fold in fixed chunk order, so the estimates are
/// bit-identical for any worker count.
inline std::vector<std::vector<OutageEstimate>> common_outage_sweep(
    const OutageScenario& scenario,
    const std::vector<DecodingStrategy>& strategies,
    const std::vector<double>& rho_grid, std::uint64_t trials,
    std::uint64_t seed, unsigned workers = 0) {
  scenario.validate();
  detail::require(!strategies.empty(), "strategies must be nonempty");
  detail::require(!rho_grid.empty(), "rho_grid must be nonempty");
  for (double rho : rho_grid) detail::require_positive(rho, "rho");
  detail::require(trials > 0, "trials must be >= 1");

  const double gamma1 = scenario.targets.gamma1();
  const double gamma2 = scenario.targets.gamma2();
  const std::size_t cells = strategies.size() * rho_grid.size();

  using Counts = std::vector<std::uint64_t>;
  auto chunk_fn = [&](std::uint64_t first, std::uint64_t count) {
    Counts local(cells, 0);
    for (std::uint64_t t = first; t < first + count; ++t) {
      TrialRng rng = derive_trial_rng(seed, t);
      const cplx h1 = rayleigh_sample(rng, scenario.mean_power1);
      const cplx h2 = rayleigh_sample(rng, scenario.mean_power2);
      const ChannelRealization ch{std::norm(h1), std::norm(h2),
                                  scenario.distance1_m, scenario.distance2_m};
      std::size_t cell = 0;
      for (const DecodingStrategy s : strategies) {
        for (const double rho : rho_grid) {
          local[cell++] += detail::common_outage_trial(
              s, ch, scenario.targets, scenario.policy, rho, gamma1, gamma2);
        }
      }
    }
    return local;
  };
  auto fold = [](Counts& acc, const Counts& part) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
  };

  const Counts totals =
      run_chunked<Counts>(trials, workers, Counts(cells, 0), chunk_fn, fold);

  std::vector<std::vector<OutageEstimate>> result(strategies.size());
  std::size_t cell = 0;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    result[si].reserve(rho_grid.size());
    for (std::size_t ri = 0; ri < rho_grid.size(); ++ri) {
      const double p =
          static_cast<double>(totals[cell++]) / static_cast<double>(trials);
      result[si].push_back(
          OutageEstimate{p, proportion_std_error(p, trials), trials, seed});
    }
  }
  return result;
}

inline OutageEstimate common_outage(const OutageScenario& scenario,
                                    DecodingStrategy strategy, double rho,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers = 0) {
  return common_outage_sweep(scenario, {strategy}, {rho}, trials, seed,
                             workers)[0][0];
}

// ---------------------------------------------------------------------------
// Outage-free feasibility
// ---------------------------------------------------------------------------

/// True iff some global decode order and power split alpha in [0, 1] lets
/// both users meet (gamma1, gamma2) simultaneously on the given fixed
/// channels. Evaluated by interval analysis over the two SIC order cases:
/// every constraint is monotone in the first-decoded share, so each order
/// reduces to one closed interval.
inline bool outage_free_feasible(double gain1, double gain2, double rho,
                                 const TargetRates& targets) {
  detail::require_nonnegative(gain1, "gain1");
  detail::require_nonnegative(gain2, "gain2");
  detail::require_positive(rho, "rho");
  targets.validate();
  const double inv_rho = 1.0 / rho;

  // Lower bound on the first-decoded share x from
  // x g / ((1-x) g + 1/rho) >= gamma; +inf when unreachable even at x = 1.
  auto share_lower_bound = [&](double g, double gamma) {
    if (gamma == 0.0) return 0.0;
    if (g <= 0.0) return std::numeric_limits<double>::infinity();
    const double bound = gamma * (g + inv_rho) / (g * (1.0 + gamma));
    return bound <= 1.0 ? bound : std::numeric_limits<double>::infinity();
  };

  const std::array<double, 2> gains{gain1, gain2};
  const std::array<double, 2> gammas{targets.gamma1(), targets.gamma2()};
  for (int first = 0; first < 2; ++first) {
    const int second = 1 - first;
    const double gf = gains[first];
    const double gs = gains[second];
    const double gamma_f = gammas[first];
    const double gamma_s = gammas[second];
    double lo = share_lower_bound(gf, gamma_f);
    double hi = 1.0;
    if (gamma_s > 0.0) {
      // SIC gate plus the own interference-free stage (1-x) rho gs >= gamma_s;
      // with a zero own target the SIC user imposes no constraint at all.
      lo = std::max(lo, share_lower_bound(gs, gamma_f));
      if (gs <= 0.0) continue;
      hi = 1.0 - gamma_s / (rho * gs);
    }
    if (lo <= hi) return true;
  }
  return false;
}

}  // namespace nomasec
