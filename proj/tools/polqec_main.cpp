// Command-line front end: one subcommand per experiment, a plain key=value
// config file, and flags that mirror the file keys. Precedence is
// flags > config file > POLQEC_SEED > built-in defaults.

#include <cstdlib>
#include <deque>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "polqec/errors.hpp"
#include "polqec/experiments.hpp"
#include "polqec/version.hpp"

namespace {

using polqec::RunConfig;

// Flag values arrive as raw strings and run through the same parser as
// config-file entries, so a value is rejected identically no matter where
// it came from.
struct FlagSet {
  std::map<std::string, std::string> values;  // key -> raw value, flags only
  std::string config_path;
};

void add_option(CLI::App* cmd, FlagSet& flags, const std::string& key,
                const std::string& help) {
  cmd->add_option_function<std::string>(
      "--" + key, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_common_options(CLI::App* cmd, FlagSet& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  add_option(cmd, flags, "seed", "master RNG seed (unsigned integer)");
  add_option(cmd, flags, "trials", "number of Monte Carlo trials / rows");
  add_option(cmd, flags, "threads", "worker thread cap (0 = library default)");
  add_option(cmd, flags, "lambda", "channel phase lambda: number | uniform | uniform:lo:hi");
  add_option(cmd, flags, "xi", "channel phase xi: number | uniform | uniform:lo:hi");
  add_option(cmd, flags, "phi", "channel mixing angle: number | uniform | uniform:lo:hi");
  add_option(cmd, flags, "json", "write the JSON summary to this file instead of stdout");
  add_option(cmd, flags, "csv", "write the per-row CSV table to this file");
}

int apply_and_run(polqec::Experiment experiment, const FlagSet& flags) {
  RunConfig cfg;
  cfg.experiment = experiment;
  try {
    if (const auto seed = polqec::seed_from_environment()) {
      cfg.seed = *seed;
    }
    if (!flags.config_path.empty()) {
      for (const auto& [key, value] : polqec::load_config_file(flags.config_path)) {
        if (flags.values.count(key) > 0) {
          continue;  // an explicit flag wins over the file
        }
        if (key == "experiment") {
          throw polqec::ConfigError(
              "key 'experiment' is fixed by the subcommand and cannot appear in a config file");
        }
        polqec::apply_config_entry(cfg, key, value);
      }
    }
    for (const auto& [key, value] : flags.values) {
      polqec::apply_config_entry(cfg, key, value);
    }
  } catch (const polqec::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return polqec::kExitIoError;
  } catch (const polqec::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return polqec::kExitConfigError;
  }
  return polqec::run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical polarization error correction toolbox"};
  app.set_version_flag("--version", std::string("polqec ") + polqec::kVersion);
  app.require_subcommand(0, 1);

  bool self_check = false;
  app.add_flag("--check", self_check, "run the built-in self test and exit");

  struct Subcommand {
    polqec::Experiment experiment;
    CLI::App* cmd;
    FlagSet flags;
  };
  // Deque keeps element addresses stable; the option callbacks hold
  // references into the FlagSet of their subcommand.
  std::deque<Subcommand> subs;

  const auto make = [&](polqec::Experiment e, const std::string& help) -> Subcommand& {
    CLI::App* cmd = app.add_subcommand(polqec::to_string(e), help);
    subs.push_back(Subcommand{e, cmd, {}});
    return subs.back();
  };

  {
    auto& s = make(polqec::Experiment::CorrectSingle,
                   "send one qubit through both correctors and report recovery");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "qubit-theta", "input qubit: cos(theta)|H> + e^{i phase} sin(theta)|V>");
    add_option(s.cmd, s.flags, "qubit-phase", "relative phase of the |V> component");
  }
  {
    auto& s = make(polqec::Experiment::CompareSetups,
                   "randomized equivalence sweep of the two correctors");
    add_common_options(s.cmd, s.flags);
  }
  {
    auto& s = make(polqec::Experiment::FpbSweep,
                   "probe-attack error rate and success probability over a p_e grid");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "pe-grid", "probe disturbance grid start:stop:step");
    add_option(s.cmd, s.flags, "key-port", "receiver port carrying the key ('1' or '2')");
  }
  {
    auto& s = make(polqec::Experiment::Bb84, "Monte Carlo four-state key exchange");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "pe", "probe disturbance in [0, 0.5]; omit for no eavesdropper");
    add_option(s.cmd, s.flags, "key-port", "receiver port carrying the key ('1' or '2')");
    add_option(s.cmd, s.flags, "both-ports", "time-multiplex both output ports (true/false)");
  }
  {
    auto& s = make(polqec::Experiment::PassiveCoherent,
                   "one coherent pulse through the passive corrector");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "alpha", "pulse amplitude |alpha|");
    add_option(s.cmd, s.flags, "pol-theta", "linear polarization angle of the prepared pulse");
  }
  {
    auto& s = make(polqec::Experiment::Mesoscopic,
                   "multi-basis coherent protocol round-trip sweep");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "alpha", "pulse amplitude |alpha|");
    add_option(s.cmd, s.flags, "m-bases", "number of polarization bases (odd)");
    add_option(s.cmd, s.flags, "grid", "interior mixing-angle grid size");
  }
  {
    auto& s = make(polqec::Experiment::Distinguishability,
                   "basis-overlap laws over a pulse-rotation grid");
    add_common_options(s.cmd, s.flags);
    add_option(s.cmd, s.flags, "alpha", "pulse amplitude |alpha|");
    add_option(s.cmd, s.flags, "theta", "rotation angle probed in the summary");
    add_option(s.cmd, s.flags, "grid", "rotation-angle grid size for the CSV table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? polqec::kExitOk : polqec::kExitConfigError;
  }

  if (self_check) {
    return polqec::run_self_check(std::cout);
  }

  for (const Subcommand& s : subs) {
    if (s.cmd->parsed()) {
      return apply_and_run(s.experiment, s.flags);
    }
  }

  std::cerr << "config error: no experiment selected (see --help)\n";
  return polqec::kExitConfigError;
}
