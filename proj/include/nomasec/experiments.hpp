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

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nomasec/channel.hpp"
#include "nomasec/common.hpp"
#include "nomasec/config.hpp"
#include "nomasec/covert.hpp"
#include "nomasec/noma.hpp"
#include "nomasec/secrecy.hpp"
#include "nomasec/sweep.hpp"
#include "nomasec/waveform.hpp"

namespace nomasec {

enum class ExperimentKind { Outage, Secrecy, Covert, Beamfocus, Waveform };

inline ExperimentKind experiment_kind_from_name(const std::string& name) {
  if (name == "outage") return ExperimentKind::Outage;
  if (name == "secrecy") return ExperimentKind::Secrecy;
  if (name == "covert") return ExperimentKind::Covert;
  if (name == "beamfocus") return ExperimentKind::Beamfocus;
  if (name == "waveform") return ExperimentKind::Waveform;
  throw ConfigError("experiment.kind", "unknown experiment kind '" + name +
                                           "' (expected outage, secrecy, "
                                           "covert, beamfocus or waveform)");
}

inline const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Outage: return "outage";
    case ExperimentKind::Secrecy: return "secrecy";
    case ExperimentKind::Covert: return "covert";
    case ExperimentKind::Beamfocus: return "beamfocus";
    case ExperimentKind::Waveform: return "waveform";
  }
  throw std::invalid_argument("unknown experiment kind");
}

inline ExperimentKind config_kind(const Config& cfg) {
  return experiment_kind_from_name(cfg.get_string("experiment", "kind"));
}

/// Command-line overrides that win over the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> workers;
};

namespace detail {

struct RunBudget {
  std::uint64_t seed;
  std::uint64_t trials;
  unsigned workers;
};

inline RunBudget read_budget(const Config& cfg, const RunOverrides& ov,
                             std::uint64_t default_trials) {
  // Read the config values unconditionally so overridden keys still count
  // as recognized settings.
  const std::uint64_t cfg_seed = cfg.get_uint64_or("experiment", "seed", 1);
  const std::uint64_t cfg_trials =
      cfg.get_uint64_or("experiment", "trials", default_trials);
  const std::uint64_t cfg_workers =
      cfg.get_uint64_or("experiment", "workers", 0);
  return RunBudget{ov.seed.value_or(cfg_seed), ov.trials.value_or(cfg_trials),
                   ov.workers.value_or(static_cast<unsigned>(cfg_workers))};
}

inline DecodingStrategy strategy_from_name(const std::string& name) {
  for (const DecodingStrategy s :
       {DecodingStrategy::FixedCsiOrder, DecodingStrategy::StatisticalCsiOrder,
        DecodingStrategy::QosCr, DecodingStrategy::HybridCsiQos,
        DecodingStrategy::PaDosHuf, DecodingStrategy::PaDosLuf}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("strategies.list", "unknown strategy '" + name + "'");
}

inline double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}

/// Runs a validation step over values that came from the config file and
/// reports failures as configuration errors (exit code 2) rather than
/// generic runtime errors.
template <typename Fn>
inline void check_config(const char* field, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// outage: common outage probability vs transmit SNR for decoding strategies
// ---------------------------------------------------------------------------

inline SweepResult run_outage_experiment(const Config& cfg,
                                         const RunOverrides& ov = {}) {
  const auto budget = detail::read_budget(cfg, ov, 100000);

  OutageScenario scenario;
  const bool has_geometry = cfg.has("geometry", "distance1_m");
  const bool has_channel = cfg.has("channel", "mean_power1");
  if (has_geometry == has_channel) {
    throw ConfigError("geometry.distance1_m",
                      "provide exactly one of [geometry] distances or "
                      "[channel] mean powers");
  }
  if (has_geometry) {
    const double ref = cfg.get_double_or("geometry", "reference_m", 1.0);
    const double exponent = cfg.get_double_or("geometry", "exponent", 2.0);
    const LinkGeometry user1{cfg.get_double("geometry", "distance1_m"), ref,
                             exponent};
    const LinkGeometry user2{cfg.get_double("geometry", "distance2_m"), ref,
                             exponent};
    scenario = OutageScenario::from_geometry(user1, user2, TargetRates{});
  } else {
    scenario.mean_power1 = cfg.get_double("channel", "mean_power1");
    scenario.mean_power2 = cfg.get_double("channel", "mean_power2");
    scenario.distance1_m = cfg.get_double_or(
        "channel", "distance1_m", std::numeric_limits<double>::quiet_NaN());
    scenario.distance2_m = cfg.get_double_or(
        "channel", "distance2_m", std::numeric_limits<double>::quiet_NaN());
  }
  scenario.targets =
      TargetRates{cfg.get_double("targets", "rate1_bits"),
                  cfg.get_double("targets", "rate2_bits")};
  scenario.policy.power_coefficient =
      cfg.get_double_or("policy", "power_coefficient", 0.7);
  scenario.policy.pa_dos_alpha =
      cfg.get_double_or("policy", "pa_dos_alpha", 0.7);
  const std::string weak_order =
      cfg.get_string_or("policy", "hybrid_weak_order", "primary_first");
  if (weak_order == "primary_first") {
    scenario.policy.hybrid_weak_order = HybridWeakOrder::PrimaryFirst;
  } else if (weak_order == "secondary_first") {
    scenario.policy.hybrid_weak_order = HybridWeakOrder::SecondaryFirst;
  } else {
    throw ConfigError("policy.hybrid_weak_order",
                      "expected primary_first or secondary_first, got '" +
                          weak_order + "'");
  }

  std::vector<DecodingStrategy> strategies;
  if (cfg.has("strategies", "list")) {
    for (const std::string& name : cfg.get_string_list("strategies", "list")) {
      strategies.push_back(detail::strategy_from_name(name));
    }
  } else {
    strategies = {DecodingStrategy::FixedCsiOrder,
                  DecodingStrategy::StatisticalCsiOrder,
                  DecodingStrategy::QosCr,
                  DecodingStrategy::HybridCsiQos,
                  DecodingStrategy::PaDosHuf,
                  DecodingStrategy::PaDosLuf};
  }

  const std::vector<double> snr_db = cfg.get_double_list("sweep", "snr_db");
  cfg.fail_on_unread();
  detail::check_config("", [&] { scenario.validate(); });

  std::vector<double> rho_grid;
  rho_grid.reserve(snr_db.size());
  for (const double db : snr_db) rho_grid.push_back(db_to_linear(db));

  const auto estimates =
      common_outage_sweep(scenario, strategies, rho_grid, budget.trials,
                          budget.seed, budget.workers);

  SweepResult result;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    const std::string metric =
        std::string("outage_") + to_string(strategies[si]);
    for (std::size_t ri = 0; ri < snr_db.size(); ++ri) {
      const OutageEstimate& e = estimates[si][ri];
      result.rows.push_back(SweepRow{snr_db[ri], metric, e.probability,
                                     e.std_error, e.trials, e.seed});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// secrecy: ergodic secrecy capacity vs transmit power over fading links
// ---------------------------------------------------------------------------

inline SweepResult run_secrecy_experiment(const Config& cfg,
                                          const RunOverrides& ov = {}) {
  const auto budget = detail::read_budget(cfg, ov, 100000);
  const FadingPair fading{cfg.get_double("links", "main_mean_power"),
                          cfg.get_double("links", "wiretap_mean_power"),
                          cfg.get_double_or("links", "main_noise", 1.0),
                          cfg.get_double_or("links", "wiretap_noise", 1.0)};
  const std::vector<double> power_db = cfg.get_double_list("sweep", "power_db");
  cfg.fail_on_unread();
  detail::check_config("links", [&] { fading.validate(); });

  SweepResult result;
  for (const double db : power_db) {
    const double power = db_to_linear(db);
    const ErgodicSecrecy erg =
        ergodic_secrecy(fading, power, budget.trials, budget.seed,
                        budget.workers);
    result.rows.push_back(SweepRow{db, "ergodic_secrecy_bits", erg.mean_bits,
                                   erg.std_error, erg.trials, erg.seed});
    const SecrecyReport mean_gain = secrecy_capacity(
        power, fading.main_mean_power, fading.wiretap_mean_power,
        fading.main_noise, fading.wiretap_noise);
    result.rows.push_back(SweepRow{db, "mean_gain_secrecy_bits",
                                   mean_gain.secrecy_capacity_bits, 0.0, 0,
                                   budget.seed});
  }
  return result;
}

// ---------------------------------------------------------------------------
// covert: warden detection performance vs observation length
// ---------------------------------------------------------------------------

inline SweepResult run_covert_experiment(const Config& cfg,
                                         const RunOverrides& ov = {}) {
  const auto budget = detail::read_budget(cfg, ov, 20000);
  const HypothesisScenario scenario{cfg.get_double("warden", "noise_power"),
                                    cfg.get_double("warden", "signal_power")};
  detail::check_config("warden", [&] { scenario.validate(); });
  const std::vector<double> samples_raw =
      cfg.get_double_list("sweep", "samples");
  cfg.fail_on_unread();

  std::vector<std::uint64_t> sample_counts;
  for (const double raw : samples_raw) {
    const auto n = static_cast<std::uint64_t>(raw);
    if (static_cast<double>(n) != raw || n == 0) {
      throw ConfigError("sweep.samples",
                        "sample counts must be positive integers");
    }
    sample_counts.push_back(n);
  }

  struct FaProbe {
    double p_fa;
    const char* suffix;
  };
  constexpr FaProbe kProbes[] = {
      {0.80, "80"}, {0.50, "50"}, {0.20, "20"}, {0.05, "5"}};

  SweepResult result;
  for (const std::uint64_t n : sample_counts) {
    const double sweep = static_cast<double>(n);
    const MinErrorReport best = min_error_detection(scenario, n);
    const double kl = kl_divergence_per_sample(scenario);
    const double pinsker = pinsker_error_lower_bound(scenario, n);
    result.rows.push_back(SweepRow{sweep, "optimal_threshold", best.threshold,
                                   0.0, 0, budget.seed});
    result.rows.push_back(SweepRow{sweep, "min_total_error", best.total_error,
                                   0.0, 0, budget.seed});
    result.rows.push_back(
        SweepRow{sweep, "kl_per_sample", kl, 0.0, 0, budget.seed});
    result.rows.push_back(SweepRow{sweep, "pinsker_lower_bound", pinsker, 0.0,
                                   0, budget.seed});

    const DetectionEstimate mc = simulate_detection(
        scenario, best.threshold, n, budget.trials, budget.seed,
        budget.workers);
    const double total_se = std::sqrt(mc.fa_std_error * mc.fa_std_error +
                                      mc.md_std_error * mc.md_std_error);
    result.rows.push_back(SweepRow{sweep, "total_error_mc",
                                   mc.p_false_alarm + mc.p_missed_detection,
                                   total_se, mc.trials, mc.seed});

    for (const FaProbe& probe : kProbes) {
      const double gamma = threshold_for_false_alarm(scenario, probe.p_fa, n);
      const DetectionProbabilities oracle =
          detection_oracle_gaussian(scenario, gamma, n);
      const DetectionEstimate probe_mc = simulate_detection(
          scenario, gamma, n, budget.trials, budget.seed, budget.workers);
      result.rows.push_back(
          SweepRow{sweep, std::string("p_md_oracle_fa_") + probe.suffix,
                   oracle.p_missed_detection, 0.0, 0, budget.seed});
      result.rows.push_back(
          SweepRow{sweep, std::string("p_md_mc_fa_") + probe.suffix,
                   probe_mc.p_missed_detection, probe_mc.md_std_error,
                   probe_mc.trials, probe_mc.seed});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// beamfocus: near-field focusing vs far-field steering secrecy
// ---------------------------------------------------------------------------

inline SweepResult run_beamfocus_experiment(const Config& cfg,
                                            const RunOverrides& ov = {}) {
  const auto budget = detail::read_budget(cfg, ov, 0);
  const auto elements = cfg.get_uint64("array", "elements");
  const double carrier_hz = cfg.get_double("array", "carrier_hz");
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
    throw ConfigError("array.carrier_hz", "must be positive");
  }
  const double wavelength = speed_of_light / carrier_hz;
  const double spacing =
      cfg.get_double_or("array", "spacing_m", wavelength / 2.0);
  const FieldPoint user{cfg.get_double("user", "range_m"),
                        detail::deg_to_rad(cfg.get_double("user", "angle_deg"))};
  const double eve_angle =
      detail::deg_to_rad(cfg.get_double("eve", "angle_deg"));
  const double power_w = dbm_to_watts(cfg.get_double("link", "power_dbm"));
  const double noise_w = dbm_to_watts(cfg.get_double("link", "noise_dbm"));
  const std::vector<double> eve_ranges =
      cfg.get_double_list("sweep", "eve_range_m");
  cfg.fail_on_unread();

  std::optional<ArrayGeometry> array;
  detail::check_config("array", [&] {
    array.emplace(ArrayGeometry::uniform_linear(
        static_cast<std::size_t>(elements), spacing));
  });

  SweepResult result;
  auto push = [&](double sweep, const std::string& name, double value) {
    result.rows.push_back(SweepRow{sweep, name, value, 0.0, 0, budget.seed});
  };
  for (const double range : eve_ranges) {
    const FieldPoint eve{range, eve_angle};
    const SecrecyReport nf =
        beamfocus_secrecy(*array, user, eve, carrier_hz, power_w, noise_w,
                          BeamfocusMode::NearFieldMatched);
    const SecrecyReport ff =
        beamfocus_secrecy(*array, user, eve, carrier_hz, power_w, noise_w,
                          BeamfocusMode::FarFieldSteering);
    push(range, "nearfield_main_bits", nf.main_capacity_bits);
    push(range, "nearfield_wiretap_bits", nf.wiretap_capacity_bits);
    push(range, "nearfield_secrecy_bits", nf.secrecy_capacity_bits);
    push(range, "farfield_main_bits", ff.main_capacity_bits);
    push(range, "farfield_wiretap_bits", ff.wiretap_capacity_bits);
    push(range, "farfield_secrecy_bits", ff.secrecy_capacity_bits);
  }
  return result;
}

// ---------------------------------------------------------------------------
// waveform: superposition-coded QPSK link with SIC reception over AWGN
// ---------------------------------------------------------------------------

inline SweepResult run_waveform_experiment(const Config& cfg,
                                           const RunOverrides& ov = {}) {
  const auto budget = detail::read_budget(cfg, ov, 2000);
  const double alpha = cfg.get_double("sc", "alpha");
  if (!(alpha > 0.0 && alpha < 1.0) || std::abs(alpha - 0.5) <= 1e-9) {
    throw ConfigError("sc.alpha",
                      "power split must lie in (0, 1) and differ from 0.5");
  }
  const auto symbols = cfg.get_uint64("frame", "symbols");
  if (symbols == 0) {
    throw ConfigError("frame.symbols", "must be at least 1");
  }
  const bool use_wfrft = cfg.has("waveform", "wfrft_order");
  const double wfrft_order =
      cfg.get_double_or("waveform", "wfrft_order", 0.0);
  const std::vector<double> esn0_db = cfg.get_double_list("sweep", "esn0_db");
  cfg.fail_on_unread();

  SweepResult result;
  const OverlapReport overlap = overlap_analysis(alpha);
  result.rows.push_back(SweepRow{alpha, "overlap_ambiguity",
                                 overlap.ambiguity_error, 0.0, 0,
                                 budget.seed});

  const std::size_t bits_per_frame = 2 * static_cast<std::size_t>(symbols);
  for (const double db : esn0_db) {
    const double noise_var = 1.0 / db_to_linear(db);

    struct ErrCounts {
      std::uint64_t err1 = 0;
      std::uint64_t err2 = 0;
    };
    auto chunk_fn = [&](std::uint64_t first, std::uint64_t count) {
      ErrCounts counts;
      std::vector<std::uint8_t> bits1(bits_per_frame), bits2(bits_per_frame);
      for (std::uint64_t t = first; t < first + count; ++t) {
        TrialRng rng = derive_trial_rng(budget.seed, t);
        for (std::size_t i = 0; i < bits_per_frame; ++i) {
          bits1[i] = uniform_unit(rng) < 0.5 ? 0 : 1;
          bits2[i] = uniform_unit(rng) < 0.5 ? 0 : 1;
        }
        std::vector<cplx> frame = sc_transmit(bits1, bits2, alpha);
        if (use_wfrft) frame = wfrft(frame, wfrft_order);
        for (cplx& s : frame) s += complex_normal(rng, noise_var);
        if (use_wfrft) frame = wfrft(frame, -wfrft_order);
        const SicDecoded decoded = sic_receive(frame, alpha);
        counts.err1 += count_bit_errors(bits1, decoded.bits1);
        counts.err2 += count_bit_errors(bits2, decoded.bits2);
      }
      return counts;
    };
    auto fold = [](ErrCounts& acc, const ErrCounts& c) {
      acc.err1 += c.err1;
      acc.err2 += c.err2;
    };
    const ErrCounts totals = run_chunked<ErrCounts>(
        budget.trials, budget.workers, ErrCounts{}, chunk_fn, fold);

    const double total_bits =
        static_cast<double>(budget.trials) * static_cast<double>(bits_per_frame);
    const double ber1 = static_cast<double>(totals.err1) / total_bits;
    const double ber2 = static_cast<double>(totals.err2) / total_bits;
    const auto bit_count = static_cast<std::uint64_t>(total_bits);
    result.rows.push_back(SweepRow{db, "ber_stream1", ber1,
                                   proportion_std_error(ber1, bit_count),
                                   budget.trials, budget.seed});
    result.rows.push_back(SweepRow{db, "ber_stream2", ber2,
                                   proportion_std_error(ber2, bit_count),
                                   budget.trials, budget.seed});
    const double q_arg = std::sqrt(db_to_linear(db));
    const double theory = 0.5 * std::erfc(q_arg / std::numbers::sqrt2);
    result.rows.push_back(
        SweepRow{db, "ber_qpsk_theory", theory, 0.0, 0, budget.seed});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline SweepResult run_experiment(const Config& cfg,
                                  const RunOverrides& ov = {}) {
  switch (config_kind(cfg)) {
    case ExperimentKind::Outage: return run_outage_experiment(cfg, ov);
    case ExperimentKind::Secrecy: return run_secrecy_experiment(cfg, ov);
    case ExperimentKind::Covert: return run_covert_experiment(cfg, ov);
    case ExperimentKind::Beamfocus: return run_beamfocus_experiment(cfg, ov);
    case ExperimentKind::Waveform: return run_waveform_experiment(cfg, ov);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace nomasec
