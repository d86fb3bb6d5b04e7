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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nomasec/experiments.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> workers;
};

void attach_options(CLI::App& sub, CliArgs& args) {
  sub.add_option("-c,--config", args.config_path,
                 "Experiment config file (INI-style)")
      ->required()
      ->check(CLI::ExistingFile);
  sub.add_option("-o,--out", args.out_path,
                 "Output CSV path (default: stdout)");
  sub.add_option("--seed", args.seed, "Override the master RNG seed");
  sub.add_option("--trials", args.trials,
                 "Override the Monte Carlo trial count");
  sub.add_option("--workers", args.workers,
                 "Worker threads (0 = hardware concurrency); results do not "
                 "depend on this");
}

int run(const std::string& kind_name, const CliArgs& args) {
  const nomasec::Config cfg = nomasec::Config::parse_file(args.config_path);
  const nomasec::ExperimentKind kind = nomasec::config_kind(cfg);
  if (kind_name != nomasec::to_string(kind)) {
    throw nomasec::ConfigError(
        "experiment.kind", std::string("config declares kind '") +
                               nomasec::to_string(kind) +
                               "' but the subcommand is '" + kind_name + "'");
  }
  nomasec::RunOverrides overrides;
  overrides.seed = args.seed;
  overrides.trials = args.trials;
  overrides.workers = args.workers;
  const nomasec::SweepResult result = nomasec::run_experiment(cfg, overrides);

  if (args.out_path.empty()) {
    nomasec::emit_csv(std::cout, result);
    std::cout.flush();
    if (!std::cout.good()) throw std::runtime_error("failed writing to stdout");
  } else {
    std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
    if (!out.good()) {
      throw std::runtime_error("cannot open output file: " + args.out_path);
    }
    nomasec::emit_csv(out, result);
    out.flush();
    if (!out.good()) {
      throw std::runtime_error("failed writing output file: " + args.out_path);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level simulations for physical-layer security in power-domain "
      "non-orthogonal multiple access"};
  app.require_subcommand(1);

  CliArgs args;
  const char* kinds[] = {"outage", "secrecy", "covert", "beamfocus",
                         "waveform"};
  const char* descriptions[] = {
      "Common outage probability vs transmit SNR for SIC decode-order "
      "strategies",
      "Ergodic secrecy capacity vs transmit power over Rayleigh links",
      "Radiometer detection of a covert transmission vs observation length",
      "Near-field beamfocusing vs far-field steering secrecy capacities",
      "Superposition-coded QPSK bit error rates with SIC reception"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(kinds[i], descriptions[i]);
    attach_options(*sub, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string kind_name = app.get_subcommands().front()->get_name();
  try {
    return run(kind_name, args);
  } catch (const nomasec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
