#ifndef POLQEC_EXPERIMENTS_HPP
#define POLQEC_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polqec/channel.hpp"

namespace polqec {

/// Named experiments runnable from the command line. Each produces a JSON
/// summary (schema {experiment, config_echo, seed, metrics, version}) and,
/// on request, a per-row CSV table.
enum class Experiment {
  CorrectSingle,     // one qubit through both correctors, single channel
  CompareSetups,     // randomized equivalence sweep of the two correctors
  FpbSweep,          // probe-attack figures over a p_e grid
  Bb84,              // Monte Carlo key exchange
  PassiveCoherent,   // one coherent pulse through the passive corrector
  Mesoscopic,        // multi-basis coherent protocol round-trip sweep
  Distinguishability // basis-overlap laws over a theta grid
};

Experiment experiment_from_name(const std::string& name);  // ConfigError on unknown
std::string to_string(Experiment e);

/// Inclusive numeric grid "start:stop:step" (stop is included when it lies
/// within half a step of the final point).
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> points() const;
};
GridSpec parse_grid(const std::string& text);  // ConfigError with context

/// Channel parameter specification accepted on the command line: either a
/// plain number (fixed) or "uniform" / "uniform:lo:hi".
ParamSpec parse_param_spec(const std::string& text, double default_lo, double default_hi);

/// Effective configuration for one run. Defaults make every experiment
/// runnable with no flags beyond its name.
struct RunConfig {
  Experiment experiment = Experiment::Bb84;
  std::uint64_t seed = 12345;
  int trials = 100000;
  int threads = 0;  // 0 = library default; never echoed (results don't depend on it)

  ChannelDistribution channel;  // lambda, xi uniform over [0,2pi); phi over [0,pi/2]

  // Probe attack (bb84, fpb-sweep): absent = no eavesdropper.
  std::optional<double> pe;
  GridSpec pe_grid{0.0, 0.5, 0.025};

  // Key extraction (bb84).
  std::string key_port = "1";
  bool both_ports = false;

  // Input qubit cos(theta)|H> + e^{i phase} sin(theta)|V> (correct-single).
  double qubit_theta = 0.6;
  double qubit_phase = 0.0;

  // Coherent-pulse experiments.
  double alpha = 3.0;       // pulse amplitude |alpha|
  double pol_theta = 0.0;   // linear polarization angle of the prepared pulse
  int m_bases = 3;          // mesoscopic basis count (odd)
  int grid_points = 9;      // sweep-grid size (phi for mesoscopic, theta for overlaps)
  double theta = 0.39269908169872414;  // pi/8; distinguishability probe angle

  // Artifacts.
  std::string json_path;  // empty = stdout
  std::string csv_path;   // empty = no CSV
};

/// Parsed key=value pairs from a plain-text config file ('#' comments, blank
/// lines ignored). Throws ConfigError with line context, IoError if
/// unreadable.
std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path);

/// Applies one config entry (file key or flag name without dashes). Unknown
/// keys and malformed values throw ConfigError naming the offending key.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Validates cross-field invariants (trials >= 1, odd m_bases, port names,
/// pe range); throws ConfigError.
void validate(const RunConfig& cfg);

/// Seed override from the environment (POLQEC_SEED); empty if unset.
/// Malformed values throw ConfigError.
std::optional<std::uint64_t> seed_from_environment();

/// Artifacts of one experiment run, produced without touching the
/// filesystem. `json` is deterministic for a given config: map keys are
/// emitted in sorted order and all doubles render with up to 17 significant
/// digits.
struct RunResult {
  std::string json;
  std::string human_line;
  std::optional<std::string> csv;
};

RunResult run_experiment(const RunConfig& cfg);

/// Runs an experiment and writes its artifacts (JSON to cfg.json_path or
/// stdout, CSV when requested), printing the one-line human summary.
/// Returns a process exit status.
int run(const RunConfig& cfg);

/// Built-in self test: a fast subset of the library's analytic guarantees.
/// Prints one line per check; returns kExitOk or kExitCheckFailed.
int run_self_check(std::ostream& out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitCheckFailed = 4;

}  // namespace polqec

#endif  // POLQEC_EXPERIMENTS_HPP
