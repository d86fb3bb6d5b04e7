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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#endif

#include "nomasec/experiments.hpp"
#include "nomasec/parallel.hpp"

using namespace nomasec;

TEST_CASE("config parsing: sections, comments and trimming") {
  const Config cfg = Config::parse_string(
      "# leading comment\n"
      "[experiment]\n"
      "  kind =  outage  ; trailing comment\n"
      "trials=5000\n"
      "\n"
      "[sweep]   # section comment\n"
      "snr_db = 10, 15, 20\n"
      "flag = yes\n"
      "name = hybrid_csi_qos\n");
  REQUIRE(cfg.get_string("experiment", "kind") == "outage");
  REQUIRE(cfg.get_uint64("experiment", "trials") == 5000);
  REQUIRE(cfg.get_double_list("sweep", "snr_db") ==
          std::vector<double>{10.0, 15.0, 20.0});
  REQUIRE(cfg.get_bool_or("sweep", "flag", false));
  REQUIRE(cfg.get_bool_or("sweep", "missing", true));
  REQUIRE(cfg.get_string_or("sweep", "missing", "dflt") == "dflt");
  REQUIRE(cfg.get_double_or("sweep", "missing", 2.5) == 2.5);
  REQUIRE(cfg.get_string_list("sweep", "name") ==
          std::vector<std::string>{"hybrid_csi_qos"});
  REQUIRE(cfg.has("sweep", "snr_db"));
  REQUIRE(!cfg.has("sweep", "nope"));
  REQUIRE_NOTHROW(cfg.fail_on_unread());
}

TEST_CASE("config parsing: malformed input is rejected with line numbers") {
  using Catch::Matchers::ContainsSubstring;

  REQUIRE_THROWS_WITH(Config::parse_string("[a\nx = 1\n"),
                      ContainsSubstring("line 1"));
  REQUIRE_THROWS_WITH(Config::parse_string("[]\n"),
                      ContainsSubstring("section"));
  REQUIRE_THROWS_WITH(Config::parse_string("[a] stray\n"),
                      ContainsSubstring("line 1"));
  REQUIRE_THROWS_WITH(Config::parse_string("[a]\njust words\n"),
                      ContainsSubstring("key = value"));
  REQUIRE_THROWS_WITH(Config::parse_string("[a]\n = 3\n"),
                      ContainsSubstring("empty key"));
  REQUIRE_THROWS_WITH(Config::parse_string("x = 1\n"),
                      ContainsSubstring("outside any [section]"));
  REQUIRE_THROWS_WITH(Config::parse_string("[a]\nx = 1\nx = 2\n"),
                      ContainsSubstring("line 3"));

  try {
    Config::parse_string("[a]\nx = 1\nx = 2\n");
    FAIL("expected a duplicate-setting error");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "a.x");
  }
}

TEST_CASE("config typed getters report the offending field") {
  const Config cfg = Config::parse_string(
      "[x]\n"
      "num = 12abc\n"
      "neg = -3\n"
      "flag = maybe\n"
      "list = 1,,2\n");

  try {
    cfg.get_double("x", "num");
    FAIL("expected a number-format error");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "x.num");
    REQUIRE(std::string(e.what()).find("expected a number") !=
            std::string::npos);
  }
  REQUIRE_THROWS_AS(cfg.get_uint64("x", "neg"), ConfigError);
  REQUIRE_THROWS_AS(cfg.get_bool_or("x", "flag", true), ConfigError);
  REQUIRE_THROWS_AS(cfg.get_double_list("x", "list"), ConfigError);
  try {
    cfg.get_double("x", "absent");
    FAIL("expected a missing-setting error");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "x.absent");
  }
}

TEST_CASE("unread settings are flagged as typos") {
  const Config cfg = Config::parse_string("[a]\nused = 1\nmisspelled = 2\n");
  (void)cfg.get_double("a", "used");
  try {
    cfg.fail_on_unread();
    FAIL("expected an unrecognized-setting error");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "a.misspelled");
  }
}

TEST_CASE("CSV output is byte-stable") {
  SweepResult result;
  result.rows.push_back(
      SweepRow{30.0, "outage_fixed_csi", 0.0895, 0.00067, 200000, 12345});
  result.rows.push_back(
      SweepRow{5.0, "nearfield_main_bits", 3.16227766e-05, 0.0, 0, 1});
  REQUIRE(to_csv(result) ==
          "sweep,metric,estimate,stderr,trials,seed\n"
          "30,outage_fixed_csi,0.0895,0.00067,200000,12345\n"
          "5,nearfield_main_bits,3.16227766e-05,0,0,1\n");

  SweepResult bad;
  bad.rows.push_back(SweepRow{0.0, "has,comma", 0.0, 0.0, 0, 0});
  std::ostringstream sink;
  REQUIRE_THROWS_AS(emit_csv(sink, bad), std::invalid_argument);
}

TEST_CASE("CSV round trip preserves rows to formatting precision") {
  SweepResult result;
  result.rows.push_back(SweepRow{17.5, "p_md_oracle_fa_5",
                                 0.123456789012345, 1.9e-300, 77, 42});
  result.rows.push_back(SweepRow{-3.0, "kl_per_sample", 0.1931471805599454,
                                 0.0, 0, 9999999999ull});
  std::istringstream in(to_csv(result));
  const SweepResult back = parse_csv(in);
  REQUIRE(back.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const SweepRow& a = result.rows[i];
    const SweepRow& b = back.rows[i];
    REQUIRE(b.metric == a.metric);
    REQUIRE(b.sweep == Catch::Approx(a.sweep).epsilon(1e-9));
    REQUIRE(b.estimate == Catch::Approx(a.estimate).epsilon(1e-9));
    REQUIRE(b.std_error == Catch::Approx(a.std_error).epsilon(1e-9));
    REQUIRE(b.trials == a.trials);
    REQUIRE(b.seed == a.seed);
  }
}

TEST_CASE("CSV parsing rejects malformed input") {
  using Catch::Matchers::ContainsSubstring;
  {
    std::istringstream in("");
    REQUIRE_THROWS_WITH(parse_csv(in), ContainsSubstring("empty"));
  }
  {
    std::istringstream in("a,b,c\n");
    REQUIRE_THROWS_WITH(parse_csv(in), ContainsSubstring("header"));
  }
  {
    std::istringstream in("sweep,metric,estimate,stderr,trials,seed\n1,m,2\n");
    REQUIRE_THROWS_WITH(parse_csv(in),
                        ContainsSubstring("line 2: expected 6 CSV fields"));
  }
  {
    std::istringstream in(
        "sweep,metric,estimate,stderr,trials,seed\n1,m,xx,0,0,0\n");
    REQUIRE_THROWS_WITH(parse_csv(in), ContainsSubstring("line 2"));
  }
  {
    std::istringstream in(
        "sweep,metric,estimate,stderr,trials,seed\n1,m,2,0,3.5,0\n");
    REQUIRE_THROWS_AS(parse_csv(in), ConfigError);
  }
}

TEST_CASE("chunked execution folds partials identically for any worker count") {
  const std::uint64_t trials = 3 * kTrialChunk + 17;
  auto chunk_fn = [](std::uint64_t first, std::uint64_t count) {
    double sum = 0.0;
    for (std::uint64_t t = first; t < first + count; ++t) {
      sum += std::sin(static_cast<double>(t) * 1e-3);
    }
    return sum;
  };
  auto fold = [](double& acc, const double& part) { acc += part; };

  const double serial = run_chunked<double>(trials, 1, 0.0, chunk_fn, fold);
  const double threaded = run_chunked<double>(trials, 5, 0.0, chunk_fn, fold);
  const double auto_w = run_chunked<double>(trials, 0, 0.0, chunk_fn, fold);
  REQUIRE(std::memcmp(&serial, &threaded, sizeof(double)) == 0);
  REQUIRE(std::memcmp(&serial, &auto_w, sizeof(double)) == 0);
}

TEST_CASE("worker exceptions propagate to the caller") {
  auto chunk_fn = [](std::uint64_t first, std::uint64_t) -> int {
    if (first >= kTrialChunk) throw std::runtime_error("simulated fault");
    return 0;
  };
  auto fold = [](int&, const int&) {};
  REQUIRE_THROWS_WITH(
      run_chunked<int>(4 * kTrialChunk, 3, 0, chunk_fn, fold),
      Catch::Matchers::ContainsSubstring("simulated fault"));
}

namespace {

RunOverrides overrides(std::uint64_t trials, unsigned workers) {
  RunOverrides ov;
  ov.trials = trials;
  ov.workers = workers;
  return ov;
}

std::set<std::string> metric_set(const SweepResult& r) {
  std::set<std::string> names;
  for (const auto& row : r.rows) names.insert(row.metric);
  return names;
}

const char* kOutageConfig =
    "[experiment]\nkind = outage\nseed = 7\n"
    "[channel]\nmean_power1 = 0.02368307\nmean_power2 = 0.05149590\n"
    "distance1_m = 4.47\ndistance2_m = 3.28\n"
    "[targets]\nrate1_bits = 1.6\nrate2_bits = 0.4\n"
    "[sweep]\nsnr_db = 30, 40\n";

}  // namespace

TEST_CASE("outage experiment runs from config text") {
  const Config cfg = Config::parse_string(kOutageConfig);
  const SweepResult res = run_experiment(cfg, overrides(2000, 0));
  REQUIRE(res.rows.size() == 12);  // six strategies x two SNR points
  const auto metrics = metric_set(res);
  for (const char* name :
       {"outage_fixed_csi", "outage_statistical_csi", "outage_qos_cr",
        "outage_hybrid_csi_qos", "outage_pa_dos_huf", "outage_pa_dos_luf"}) {
    INFO(name);
    REQUIRE(metrics.count(name) == 1);
  }
  for (const auto& row : res.rows) {
    REQUIRE(row.estimate >= 0.0);
    REQUIRE(row.estimate <= 1.0);
    REQUIRE(row.trials == 2000);
    REQUIRE(row.seed == 7);
    REQUIRE((row.sweep == 30.0 || row.sweep == 40.0));
  }
}

TEST_CASE("experiment output is identical for any worker count") {
  struct Case {
    const char* text;
    std::uint64_t trials;
  };
  const Case cases[] = {
      {kOutageConfig, 20000},
      {"[experiment]\nkind = secrecy\n"
       "[links]\nmain_mean_power = 1.0\nwiretap_mean_power = 0.25\n"
       "[sweep]\npower_db = 0, 10\n",
       20000},
      {"[experiment]\nkind = covert\n"
       "[warden]\nnoise_power = 1.0\nsignal_power = 1.0\n"
       "[sweep]\nsamples = 2, 8\n",
       5000},
      {"[experiment]\nkind = waveform\n"
       "[sc]\nalpha = 0.7\n[frame]\nsymbols = 32\n"
       "[waveform]\nwfrft_order = 0.5\n"
       "[sweep]\nesn0_db = 6\n",
       200},
  };
  for (const Case& c : cases) {
    const Config cfg = Config::parse_string(c.text);
    const std::string serial =
        to_csv(run_experiment(cfg, overrides(c.trials, 1)));
    const std::string threaded =
        to_csv(run_experiment(cfg, overrides(c.trials, 3)));
    INFO("config:\n" << c.text);
    REQUIRE(serial == threaded);
    REQUIRE(serial.find('\n') != std::string::npos);
  }
}

TEST_CASE("secrecy experiment emits simulated and mean-gain rows") {
  const Config cfg = Config::parse_string(
      "[experiment]\nkind = secrecy\nseed = 3\n"
      "[links]\nmain_mean_power = 1.0\nwiretap_mean_power = 0.25\n"
      "[sweep]\npower_db = 10\n");
  const SweepResult res = run_experiment(cfg, overrides(2000, 0));
  REQUIRE(res.rows.size() == 2);
  REQUIRE(res.rows[0].metric == "ergodic_secrecy_bits");
  REQUIRE(res.rows[0].trials == 2000);
  REQUIRE(res.rows[0].std_error > 0.0);
  REQUIRE(res.rows[1].metric == "mean_gain_secrecy_bits");
  REQUIRE(res.rows[1].trials == 0);
  REQUIRE(res.rows[1].std_error == 0.0);
  REQUIRE(res.rows[1].estimate ==
          Catch::Approx(std::log2(11.0 / 3.5)).epsilon(1e-12));
}

TEST_CASE("covert experiment emits oracle and Monte Carlo rows") {
  const Config cfg = Config::parse_string(
      "[experiment]\nkind = covert\n"
      "[warden]\nnoise_power = 1.0\nsignal_power = 1.0\n"
      "[sweep]\nsamples = 2, 8\n");
  const SweepResult res = run_experiment(cfg, overrides(1000, 0));
  REQUIRE(res.rows.size() == 26);  // 13 rows per observation length
  const auto metrics = metric_set(res);
  for (const char* name :
       {"optimal_threshold", "min_total_error", "kl_per_sample",
        "pinsker_lower_bound", "total_error_mc", "p_md_oracle_fa_80",
        "p_md_mc_fa_80", "p_md_oracle_fa_50", "p_md_mc_fa_50",
        "p_md_oracle_fa_20", "p_md_mc_fa_20", "p_md_oracle_fa_5",
        "p_md_mc_fa_5"}) {
    INFO(name);
    REQUIRE(metrics.count(name) == 1);
  }
  for (const auto& row : res.rows) {
    if (row.metric == "kl_per_sample") {
      REQUIRE(row.estimate ==
              Catch::Approx(0.1931471805599454).epsilon(1e-12));
    }
    if (row.metric == "pinsker_lower_bound" && row.sweep == 2.0) {
      REQUIRE(row.estimate == Catch::Approx(0.56051487).margin(1e-6));
    }
  }
}

TEST_CASE("beamfocus experiment emits both focusing modes") {
  const Config cfg = Config::parse_string(
      "[experiment]\nkind = beamfocus\n"
      "[array]\nelements = 16\ncarrier_hz = 28e9\n"
      "[user]\nrange_m = 15\nangle_deg = 0\n"
      "[eve]\nangle_deg = 0\n"
      "[link]\npower_dbm = -15\nnoise_dbm = -90\n"
      "[sweep]\neve_range_m = 5, 30\n");
  const SweepResult res = run_experiment(cfg, {});
  REQUIRE(res.rows.size() == 12);
  const auto metrics = metric_set(res);
  for (const char* name :
       {"nearfield_main_bits", "nearfield_wiretap_bits",
        "nearfield_secrecy_bits", "farfield_main_bits",
        "farfield_wiretap_bits", "farfield_secrecy_bits"}) {
    INFO(name);
    REQUIRE(metrics.count(name) == 1);
  }
  for (const auto& row : res.rows) {
    REQUIRE(row.trials == 0);
    REQUIRE(row.std_error == 0.0);
    REQUIRE(row.estimate >= 0.0);
    REQUIRE(std::isfinite(row.estimate));
  }
}

TEST_CASE("waveform experiment emits overlap and BER rows") {
  const Config cfg = Config::parse_string(
      "[experiment]\nkind = waveform\nseed = 5\n"
      "[sc]\nalpha = 0.7\n[frame]\nsymbols = 64\n"
      "[sweep]\nesn0_db = 8\n");
  const SweepResult res = run_experiment(cfg, overrides(300, 0));
  REQUIRE(res.rows.size() == 4);
  REQUIRE(res.rows[0].metric == "overlap_ambiguity");
  REQUIRE(res.rows[0].sweep == 0.7);
  REQUIRE(res.rows[0].estimate == 0.0);
  REQUIRE(res.rows[1].metric == "ber_stream1");
  REQUIRE(res.rows[2].metric == "ber_stream2");
  REQUIRE(res.rows[3].metric == "ber_qpsk_theory");
  const double expected_theory =
      0.5 * std::erfc(std::sqrt(std::pow(10.0, 0.8)) / std::numbers::sqrt2);
  REQUIRE(res.rows[3].estimate ==
          Catch::Approx(expected_theory).epsilon(1e-12));
  for (const auto& row : res.rows) {
    REQUIRE(row.estimate >= 0.0);
    REQUIRE(row.estimate <= 1.0);
  }
}

TEST_CASE("invalid experiment configurations are rejected") {
  REQUIRE_THROWS_AS(experiment_kind_from_name("bogus"), ConfigError);

  // Unknown strategy name.
  const Config bad_strategy = Config::parse_string(
      std::string(kOutageConfig) + "[strategies]\nlist = fixed_csi, bogus\n");
  REQUIRE_THROWS_AS(run_experiment(bad_strategy, overrides(10, 1)),
                    ConfigError);

  // Both [geometry] and [channel] present.
  const Config both = Config::parse_string(
      std::string(kOutageConfig) + "[geometry]\ndistance1_m = 4\n");
  REQUIRE_THROWS_AS(run_experiment(both, overrides(10, 1)), ConfigError);

  // Misspelled key.
  const Config typo = Config::parse_string(std::string(kOutageConfig) +
                                           "[policy]\npower_coeficient = 0.7\n");
  try {
    run_experiment(typo, overrides(10, 1));
    FAIL("expected an unrecognized-setting error");
  } catch (const ConfigError& e) {
    REQUIRE(e.field() == "policy.power_coeficient");
  }

  // Invalid values caught as configuration errors.
  const Config bad_alpha = Config::parse_string(
      "[experiment]\nkind = waveform\n[sc]\nalpha = 0.5\n"
      "[frame]\nsymbols = 8\n[sweep]\nesn0_db = 6\n");
  REQUIRE_THROWS_AS(run_experiment(bad_alpha, overrides(10, 1)), ConfigError);

  const Config bad_noise = Config::parse_string(
      "[experiment]\nkind = covert\n"
      "[warden]\nnoise_power = 0\nsignal_power = 1\n[sweep]\nsamples = 4\n");
  REQUIRE_THROWS_AS(run_experiment(bad_noise, overrides(10, 1)), ConfigError);

  const Config frac_samples = Config::parse_string(
      "[experiment]\nkind = covert\n"
      "[warden]\nnoise_power = 1\nsignal_power = 1\n[sweep]\nsamples = 2.5\n");
  REQUIRE_THROWS_AS(run_experiment(frac_samples, overrides(10, 1)),
                    ConfigError);
}

#ifdef __unix__
namespace {

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("command-line runner exit codes") {
  const char* cli = std::getenv("NOMASEC_CLI");
  const char* configs = std::getenv("NOMASEC_CONFIGS");
  if (cli == nullptr || configs == nullptr) {
    WARN("NOMASEC_CLI / NOMASEC_CONFIGS not set; skipping subprocess checks");
    return;
  }
  const std::string base(cli);
  const std::string dir(configs);

  REQUIRE(run_command(base + " secrecy --config " + dir +
                      "/secrecy.ini --trials 500 > /dev/null 2>&1") == 0);
  // Subcommand does not match the config's experiment kind.
  REQUIRE(run_command(base + " covert --config " + dir +
                      "/secrecy.ini --trials 10 > /dev/null 2>&1") == 2);
  REQUIRE(run_command(base + " outage --config /nonexistent.ini "
                             "> /dev/null 2>&1") == 2);
  REQUIRE(run_command(base + " --help > /dev/null 2>&1") == 0);
}
#endif
