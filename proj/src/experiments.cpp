#include "polqec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "polqec/bb84.hpp"
#include "polqec/coherent_field.hpp"
#include "polqec/errors.hpp"
#include "polqec/fpb.hpp"
#include "polqec/photon_state.hpp"
#include "polqec/mesoscopic.hpp"
#include "polqec/rng.hpp"
#include "polqec/setups.hpp"
#include "polqec/version.hpp"

namespace polqec {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Small formatting / parsing helpers

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::uint64_t to_uint64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.find('-') != std::string::npos) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type from = 0;
  while (true) {
    const auto at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

std::string spec_string(const ParamSpec& spec) {
  if (spec.kind == ParamSpec::Kind::Fixed) {
    return "fixed:" + fmt_double(spec.value);
  }
  return "uniform:" + fmt_double(spec.value) + ":" + fmt_double(spec.upper);
}

std::string grid_string(const GridSpec& g) {
  return fmt_double(g.start) + ":" + fmt_double(g.stop) + ":" + fmt_double(g.step);
}

// ---------------------------------------------------------------------------
// CSV assembly (headers, RFC-style quoting, '.' decimal separator)

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) { append_row(header); }

  void append_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) {
        out_ += ',';
      }
      out_ += csv_escape(fields[i]);
    }
    out_ += '\n';
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

// ---------------------------------------------------------------------------
// Shared experiment plumbing

PhotonState qubit_from_angles(double theta, double phase) {
  return PhotonState::qubit(std::cos(theta), std::polar(std::sin(theta), phase), ports::kIn);
}

// Expected recovered qubit on one output port (delay 1).
PhotonState expected_output(Complex alpha, Complex beta, const std::string& port) {
  PhotonState::TermMap terms;
  terms[{Pol::H, 1, port, std::nullopt}] = alpha;
  terms[{Pol::V, 1, port, std::nullopt}] = beta;
  return PhotonState(std::move(terms));
}

struct PortCheck {
  double mass = 0.0;
  double infidelity = -1.0;  // -1 when the port carries nothing
};

PortCheck check_port(const PhotonState& output, Complex alpha, Complex beta,
                     const std::string& port) {
  auto [mass, collapsed] = postselect(output, [&](const ModeLabel& m) { return m.port == port; });
  PortCheck check;
  check.mass = mass;
  if (collapsed) {
    check.infidelity = 1.0 - fidelity(*collapsed, expected_output(alpha, beta, port));
  }
  return check;
}

struct Artifacts {
  json metrics;
  std::string human;
  std::optional<std::string> csv;
};

Artifacts run_correct_single(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const ChannelParams params = sample_params(rng, cfg.channel);
  const Complex alpha = std::cos(cfg.qubit_theta);
  const Complex beta = std::polar(std::sin(cfg.qubit_theta), cfg.qubit_phase);

  const PhotonState input = qubit_from_angles(cfg.qubit_theta, cfg.qubit_phase);
  const PhotonState out2 = run_fig2_corrector(input, params);
  const PhotonState out1 = run_fig1_corrector(input, params);

  const PortCheck p1 = check_port(out2, alpha, beta, ports::kOut1);
  const PortCheck p2 = check_port(out2, alpha, beta, ports::kOut2);
  const double cross_infidelity = 1.0 - fidelity(out1, out2);

  Artifacts art;
  art.metrics["lambda"] = params.lambda_phase;
  art.metrics["xi"] = params.xi_phase;
  art.metrics["phi"] = params.phi_mix;
  art.metrics["port1_mass"] = p1.mass;
  art.metrics["port2_mass"] = p2.mass;
  art.metrics["fidelity_port1"] = p1.infidelity < 0 ? json() : json(1.0 - p1.infidelity);
  art.metrics["fidelity_port2"] = p2.infidelity < 0 ? json() : json(1.0 - p2.infidelity);
  art.metrics["setups_agreement_infidelity"] = cross_infidelity;

  CsvBuilder csv({"lambda", "xi", "phi", "port1_mass", "port2_mass", "fidelity_port1",
                  "fidelity_port2", "setups_agreement_infidelity"});
  csv.append_row({fmt_double(params.lambda_phase), fmt_double(params.xi_phase),
                  fmt_double(params.phi_mix), fmt_double(p1.mass), fmt_double(p2.mass),
                  p1.infidelity < 0 ? "" : fmt_double(1.0 - p1.infidelity),
                  p2.infidelity < 0 ? "" : fmt_double(1.0 - p2.infidelity),
                  fmt_double(cross_infidelity)});
  art.csv = csv.take();

  char line[160];
  std::snprintf(line, sizeof line,
                "correct-single: phi=%.4f port masses %.6f/%.6f, agreement infidelity %.2e",
                params.phi_mix, p1.mass, p2.mass, cross_infidelity);
  art.human = line;
  return art;
}

Artifacts run_compare_setups(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  double max_cross = 0.0;
  double max_mass_delta = 0.0;
  double max_recovery = 0.0;

  CsvBuilder csv({"trial", "phi", "cross_infidelity", "recovery_infidelity_port1",
                  "recovery_infidelity_port2"});
  for (int t = 0; t < cfg.trials; ++t) {
    const double bloch = uniform_unit(rng) * std::numbers::pi;
    const double phase = uniform_unit(rng) * 2.0 * std::numbers::pi;
    const Complex alpha = std::cos(0.5 * bloch);
    const Complex beta = std::polar(std::sin(0.5 * bloch), phase);
    const PhotonState input = PhotonState::qubit(alpha, beta, ports::kIn);
    const ChannelParams params = sample_params(rng, cfg.channel);

    const PhotonState out1 = run_fig1_corrector(input, params);
    const PhotonState out2 = run_fig2_corrector(input, params);

    const double cross = 1.0 - fidelity(out1, out2);
    max_cross = std::max(max_cross, cross);

    const PortCheck c1 = check_port(out2, alpha, beta, ports::kOut1);
    const PortCheck c2 = check_port(out2, alpha, beta, ports::kOut2);
    const PortCheck d1 = check_port(out1, alpha, beta, ports::kOut1);
    max_mass_delta = std::max(max_mass_delta, std::abs(c1.mass - d1.mass));
    for (const PortCheck& c : {c1, c2}) {
      if (c.infidelity >= 0) {
        max_recovery = std::max(max_recovery, c.infidelity);
      }
    }
    csv.append_row({std::to_string(t), fmt_double(params.phi_mix), fmt_double(cross),
                    c1.infidelity < 0 ? "" : fmt_double(c1.infidelity),
                    c2.infidelity < 0 ? "" : fmt_double(c2.infidelity)});
  }

  Artifacts art;
  art.metrics["trials"] = cfg.trials;
  art.metrics["max_cross_infidelity"] = max_cross;
  art.metrics["max_port_mass_delta"] = max_mass_delta;
  art.metrics["max_recovery_infidelity"] = max_recovery;
  art.csv = csv.take();

  char line[160];
  std::snprintf(line, sizeof line,
                "compare-setups: %d trials, max cross infidelity %.2e, max recovery "
                "infidelity %.2e",
                cfg.trials, max_cross, max_recovery);
  art.human = line;
  return art;
}

Artifacts run_fpb_sweep(const RunConfig& cfg) {
  // The disturbance statistics are channel-independent; one interior working
  // point is enough for the sweep table.
  const ChannelParams params{0.9, 2.1, 0.7};
  const std::vector<double> grid = cfg.pe_grid.points();
  constexpr AliceChoice kChoices[] = {AliceChoice::H, AliceChoice::V, AliceChoice::Plus,
                                      AliceChoice::Minus};

  double max_success = 0.0;
  double pe_at_max = 0.0;
  double max_qber_deviation = 0.0;
  CsvBuilder csv({"pe", "qber", "eve_success"});
  for (const double pe : grid) {
    const FpbConfig attack(pe);
    double qber = 0.0;
    for (const AliceChoice choice : kChoices) {
      const PhotonState out = fpb_through_corrector(choice, attack, params);
      qber += conditional_error_probability(out, cfg.key_port, choice);
    }
    qber /= 4.0;
    const double success = fpb_eve_success_probability(pe);
    if (success > max_success) {
      max_success = success;
      pe_at_max = pe;
    }
    max_qber_deviation = std::max(max_qber_deviation, std::abs(qber - pe));
    csv.append_row({fmt_double(pe), fmt_double(qber), fmt_double(success)});
  }

  Artifacts art;
  art.metrics["pe_points"] = grid.size();
  art.metrics["max_eve_success"] = max_success;
  art.metrics["pe_at_max"] = pe_at_max;
  art.metrics["eve_success_at_quarter"] = fpb_eve_success_probability(0.25);
  art.metrics["max_qber_deviation"] = max_qber_deviation;
  art.csv = csv.take();

  char line[160];
  std::snprintf(line, sizeof line,
                "fpb-sweep: %zu points, success peaks at %.6f for pe=%.4f", grid.size(),
                max_success, pe_at_max);
  art.human = line;
  return art;
}

Artifacts run_bb84_experiment(const RunConfig& cfg) {
  Bb84Config bc;
  bc.rounds = static_cast<std::size_t>(cfg.trials);
  bc.seed = cfg.seed;
  if (cfg.pe) {
    bc.eve = FpbConfig(*cfg.pe);
  }
  bc.channel = cfg.channel;
  bc.key_port = cfg.key_port;
  bc.both_ports = cfg.both_ports;
  bc.keep_records = true;

  const Bb84Result result = run_bb84(bc, Execution::Parallel);

  Artifacts art;
  art.metrics["rounds"] = result.stats.rounds;
  art.metrics["sifted"] = result.stats.sifted;
  art.metrics["errors"] = result.stats.errors;
  art.metrics["sift_rate"] = result.stats.sift_rate;
  art.metrics["qber"] = result.stats.qber;
  if (result.stats.eve_success) {
    art.metrics["eve_correct"] = result.stats.eve_correct;
    art.metrics["eve_success"] = *result.stats.eve_success;
  }

  CsvBuilder csv({"round", "alice_state", "alice_bit", "bob_basis", "detected_port",
                  "detected_delay", "bob_bit", "sifted", "error", "eve_guess"});
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const TrialRecord& rec = result.records[i];
    csv.append_row({std::to_string(i), to_string(rec.alice_state),
                    std::to_string(rec.alice_bit), to_string(rec.bob_basis), rec.detected_port,
                    std::to_string(rec.detected_delay), std::to_string(rec.bob_bit),
                    rec.sifted ? "1" : "0", rec.error ? "1" : "0",
                    rec.eve_guess ? std::to_string(*rec.eve_guess) : ""});
  }
  art.csv = csv.take();

  char line[200];
  if (result.stats.eve_success) {
    std::snprintf(line, sizeof line,
                  "bb84: %zu rounds, sift rate %.4f, qber %.4f, probe success %.4f",
                  result.stats.rounds, result.stats.sift_rate, result.stats.qber,
                  *result.stats.eve_success);
  } else {
    std::snprintf(line, sizeof line, "bb84: %zu rounds, sift rate %.4f, qber %.6f",
                  result.stats.rounds, result.stats.sift_rate, result.stats.qber);
  }
  art.human = line;
  return art;
}

Artifacts run_passive_coherent(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const ChannelParams params = sample_params(rng, cfg.channel);
  const Complex ah = cfg.alpha * std::cos(cfg.pol_theta);
  const Complex av = cfg.alpha * std::sin(cfg.pol_theta);
  const double input_power = std::norm(ah) + std::norm(av);

  const PassiveRun run = run_fig4_passive(ah, av, params);
  const CoherentField useful = select_useful_pulse(run.output);
  const double p1 = useful.slot_power({1, ports::kOut1});
  const double p2 = useful.slot_power({1, ports::kOut2});
  const double phi_estimate = estimate_phi(p1, p2);
  const double balance =
      std::abs(input_power - run.output.total_power() - run.output.discarded_power());

  Artifacts art;
  art.metrics["lambda"] = params.lambda_phase;
  art.metrics["xi"] = params.xi_phase;
  art.metrics["phi"] = params.phi_mix;
  art.metrics["phi_estimate"] = phi_estimate;
  art.metrics["power_port1"] = p1;
  art.metrics["power_port2"] = p2;
  art.metrics["input_power"] = input_power;
  art.metrics["useful_power"] = useful.total_power();
  art.metrics["discarded_power"] = useful.discarded_power();
  art.metrics["power_balance_error"] = balance;

  CsvBuilder csv({"lambda", "xi", "phi", "phi_estimate", "power_port1", "power_port2",
                  "input_power", "useful_power", "discarded_power", "power_balance_error"});
  csv.append_row({fmt_double(params.lambda_phase), fmt_double(params.xi_phase),
                  fmt_double(params.phi_mix), fmt_double(phi_estimate), fmt_double(p1),
                  fmt_double(p2), fmt_double(input_power), fmt_double(useful.total_power()),
                  fmt_double(useful.discarded_power()), fmt_double(balance)});
  art.csv = csv.take();

  char line[200];
  std::snprintf(line, sizeof line,
                "passive-coherent: phi=%.4f estimated %.4f, useful powers %.4f/%.4f",
                params.phi_mix, phi_estimate, p1, p2);
  art.human = line;
  return art;
}

Artifacts run_mesoscopic_experiment(const RunConfig& cfg) {
  const MesoscopicConfig mc(cfg.m_bases, cfg.alpha);
  std::mt19937_64 rng(cfg.seed);
  const ChannelParams drawn = sample_params(rng, cfg.channel);

  int cases = 0;
  int decode_errors = 0;
  double max_wrong_power = 0.0;
  double max_phi_error = 0.0;
  CsvBuilder csv({"bit", "basis", "phi", "decoded_bit", "wrong_detector_power", "phi_estimate"});

  for (int bit = 0; bit <= 1; ++bit) {
    for (int basis = 1; basis <= cfg.m_bases; ++basis) {
      for (int j = 0; j < cfg.grid_points; ++j) {
        const double phi =
            (j + 0.5) * (0.5 * std::numbers::pi) / static_cast<double>(cfg.grid_points);
        const ChannelParams params{drawn.lambda_phase, drawn.xi_phase, phi};
        const MesoscopicRound round = run_mesoscopic_round(bit, basis, mc, params);
        ++cases;
        if (round.decoded_bit != bit) {
          ++decode_errors;
        }
        const double wrong = round.detector_power[1 - bit];
        max_wrong_power = std::max(max_wrong_power, wrong);
        const double phi_estimate = estimate_phi(round.power_port1, round.power_port2);
        max_phi_error = std::max(max_phi_error, std::abs(phi_estimate - phi));
        csv.append_row({std::to_string(bit), std::to_string(basis), fmt_double(phi),
                        std::to_string(round.decoded_bit), fmt_double(wrong),
                        fmt_double(phi_estimate)});
      }
    }
  }

  Artifacts art;
  art.metrics["m_bases"] = cfg.m_bases;
  art.metrics["alpha"] = cfg.alpha;
  art.metrics["cases"] = cases;
  art.metrics["decode_errors"] = decode_errors;
  art.metrics["max_wrong_detector_power"] = max_wrong_power;
  art.metrics["max_phi_estimate_error"] = max_phi_error;
  art.csv = csv.take();

  char line[200];
  std::snprintf(line, sizeof line,
                "mesoscopic: M=%d, %d cases, %d decode errors, max stray power %.2e",
                cfg.m_bases, cases, decode_errors, max_wrong_power);
  art.human = line;
  return art;
}

Artifacts run_distinguishability(const RunConfig& cfg) {
  const Complex alpha{cfg.alpha, 0};
  CsvBuilder csv({"theta", "overlap_paper", "overlap_exact"});
  for (int j = 0; j < cfg.grid_points; ++j) {
    const double theta =
        (j + 1) * (0.5 * std::numbers::pi) / static_cast<double>(cfg.grid_points);
    csv.append_row({fmt_double(theta), fmt_double(distinguishability_paper(alpha, theta)),
                    fmt_double(distinguishability_exact(alpha, theta))});
  }

  const double at_paper = distinguishability_paper(alpha, cfg.theta);
  const double at_exact = distinguishability_exact(alpha, cfg.theta);
  // The two laws disagree: log(exact)/log(paper) = (1 - cos theta)/sin^2
  // theta = 1/(1 + cos theta), which tends to 1/2 for small angles. That
  // factor-of-two gap in the exponent is part of the documented discrepancy.
  const double small = 1e-4;
  const double ratio_small = std::log(distinguishability_exact(alpha, small)) /
                             std::log(distinguishability_paper(alpha, small));

  Artifacts art;
  art.metrics["alpha"] = cfg.alpha;
  art.metrics["theta"] = cfg.theta;
  art.metrics["overlap_paper"] = at_paper;
  art.metrics["overlap_exact"] = at_exact;
  art.metrics["log_ratio_at_theta"] = std::log(at_exact) / std::log(at_paper);
  art.metrics["log_ratio_small_theta"] = ratio_small;
  art.csv = csv.take();

  char line[200];
  std::snprintf(line, sizeof line,
                "distinguishability: theta=%.4f overlap %.6g (quadratic law) vs %.6g (exact)",
                cfg.theta, at_paper, at_exact);
  art.human = line;
  return art;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names, grids, parameter specs

Experiment experiment_from_name(const std::string& name) {
  if (name == "correct-single") return Experiment::CorrectSingle;
  if (name == "compare-setups") return Experiment::CompareSetups;
  if (name == "fpb-sweep") return Experiment::FpbSweep;
  if (name == "bb84") return Experiment::Bb84;
  if (name == "passive-coherent") return Experiment::PassiveCoherent;
  if (name == "mesoscopic") return Experiment::Mesoscopic;
  if (name == "distinguishability") return Experiment::Distinguishability;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::CorrectSingle:
      return "correct-single";
    case Experiment::CompareSetups:
      return "compare-setups";
    case Experiment::FpbSweep:
      return "fpb-sweep";
    case Experiment::Bb84:
      return "bb84";
    case Experiment::PassiveCoherent:
      return "passive-coherent";
    case Experiment::Mesoscopic:
      return "mesoscopic";
    case Experiment::Distinguishability:
      return "distinguishability";
  }
  return "?";
}

std::vector<double> GridSpec::points() const {
  if (!(step > 0.0)) {
    throw RangeError("grid step must be positive");
  }
  if (stop < start) {
    throw RangeError("grid stop lies before its start");
  }
  const double span = (stop - start) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 0.5)) + 1;
  if (count > 1000000) {
    throw RangeError("grid would have more than 1e6 points");
  }
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    pts[i] = std::min(start + static_cast<double>(i) * step, stop);
  }
  return pts;
}

GridSpec parse_grid(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  GridSpec g;
  if (parts.size() == 1) {
    g.start = g.stop = to_double("grid", parts[0]);
    g.step = 1.0;
    return g;
  }
  if (parts.size() != 3) {
    throw ConfigError("grid '" + text + "' must look like start:stop:step");
  }
  g.start = to_double("grid start", parts[0]);
  g.stop = to_double("grid stop", parts[1]);
  g.step = to_double("grid step", parts[2]);
  if (!(g.step > 0.0)) {
    throw ConfigError("grid '" + text + "': step must be positive");
  }
  if (g.stop < g.start) {
    throw ConfigError("grid '" + text + "': stop lies before start");
  }
  return g;
}

ParamSpec parse_param_spec(const std::string& text, double default_lo, double default_hi) {
  if (text == "uniform") {
    return ParamSpec::uniform(default_lo, default_hi);
  }
  if (text.rfind("uniform:", 0) == 0) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) {
      throw ConfigError("parameter spec '" + text + "' must look like uniform:lo:hi");
    }
    const double lo = to_double("uniform lo", parts[1]);
    const double hi = to_double("uniform hi", parts[2]);
    if (!(hi > lo)) {
      throw ConfigError("parameter spec '" + text + "': upper bound must exceed lower");
    }
    return ParamSpec::uniform(lo, hi);
  }
  return ParamSpec::fixed(to_double("parameter", text));
}

// ---------------------------------------------------------------------------
// Config loading

std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) {
      line.erase(comment);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  if (key == "experiment") {
    cfg.experiment = experiment_from_name(value);
  } else if (key == "seed") {
    cfg.seed = to_uint64(key, value);
  } else if (key == "trials") {
    const long long t = to_int(key, value);
    if (t < 1 || t > 2000000000LL) {
      throw ConfigError("key 'trials': must lie in [1, 2e9], got '" + value + "'");
    }
    cfg.trials = static_cast<int>(t);
  } else if (key == "threads") {
    const long long t = to_int(key, value);
    if (t < 0 || t > 4096) {
      throw ConfigError("key 'threads': must lie in [0, 4096], got '" + value + "'");
    }
    cfg.threads = static_cast<int>(t);
  } else if (key == "pe") {
    cfg.pe = to_double(key, value);
  } else if (key == "pe-grid") {
    cfg.pe_grid = parse_grid(value);
  } else if (key == "key-port") {
    cfg.key_port = value;
  } else if (key == "both-ports") {
    cfg.both_ports = to_bool(key, value);
  } else if (key == "lambda") {
    cfg.channel.lambda = parse_param_spec(value, 0.0, kTwoPi);
  } else if (key == "xi") {
    cfg.channel.xi = parse_param_spec(value, 0.0, kTwoPi);
  } else if (key == "phi") {
    cfg.channel.phi = parse_param_spec(value, 0.0, kHalfPi);
  } else if (key == "qubit-theta") {
    cfg.qubit_theta = to_double(key, value);
  } else if (key == "qubit-phase") {
    cfg.qubit_phase = to_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, value);
  } else if (key == "pol-theta") {
    cfg.pol_theta = to_double(key, value);
  } else if (key == "m-bases") {
    const long long m = to_int(key, value);
    if (m < 1 || m > 1001) {
      throw ConfigError("key 'm-bases': must lie in [1, 1001], got '" + value + "'");
    }
    cfg.m_bases = static_cast<int>(m);
  } else if (key == "grid") {
    const long long g = to_int(key, value);
    if (g < 1 || g > 100000) {
      throw ConfigError("key 'grid': must lie in [1, 1e5], got '" + value + "'");
    }
    cfg.grid_points = static_cast<int>(g);
  } else if (key == "theta") {
    cfg.theta = to_double(key, value);
  } else if (key == "json") {
    cfg.json_path = value;
  } else if (key == "csv") {
    cfg.csv_path = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.trials < 1) {
    throw ConfigError("trials must be >= 1");
  }
  if (cfg.pe && !(*cfg.pe >= 0.0 && *cfg.pe <= 0.5)) {
    throw ConfigError("pe=" + fmt_double(*cfg.pe) + " outside the valid range [0, 0.5]");
  }
  if (cfg.key_port != ports::kOut1 && cfg.key_port != ports::kOut2) {
    throw ConfigError("key-port must be '1' or '2'");
  }
  if (!(cfg.pe_grid.step > 0.0)) {
    throw ConfigError("pe-grid step must be positive");
  }
  if (cfg.experiment == Experiment::Mesoscopic) {
    if (cfg.m_bases % 2 == 0) {
      throw ConfigError("m-bases must be odd");
    }
  }
  if (cfg.experiment == Experiment::PassiveCoherent ||
      cfg.experiment == Experiment::Mesoscopic ||
      cfg.experiment == Experiment::Distinguishability) {
    if (!(cfg.alpha > 0.0)) {
      throw ConfigError("alpha must be positive");
    }
  }
  if (cfg.grid_points < 1) {
    throw ConfigError("grid must be >= 1");
  }
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("POLQEC_SEED");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  return to_uint64("POLQEC_SEED", raw);
}

// ---------------------------------------------------------------------------
// Orchestration

RunResult run_experiment(const RunConfig& cfg) {
  validate(cfg);
#ifdef _OPENMP
  if (cfg.threads > 0) {
    omp_set_num_threads(cfg.threads);
  }
#endif

  Artifacts art;
  switch (cfg.experiment) {
    case Experiment::CorrectSingle:
      art = run_correct_single(cfg);
      break;
    case Experiment::CompareSetups:
      art = run_compare_setups(cfg);
      break;
    case Experiment::FpbSweep:
      art = run_fpb_sweep(cfg);
      break;
    case Experiment::Bb84:
      art = run_bb84_experiment(cfg);
      break;
    case Experiment::PassiveCoherent:
      art = run_passive_coherent(cfg);
      break;
    case Experiment::Mesoscopic:
      art = run_mesoscopic_experiment(cfg);
      break;
    case Experiment::Distinguishability:
      art = run_distinguishability(cfg);
      break;
  }

  json echo;
  echo["trials"] = cfg.trials;
  echo["channel"] = {{"lambda", spec_string(cfg.channel.lambda)},
                     {"xi", spec_string(cfg.channel.xi)},
                     {"phi", spec_string(cfg.channel.phi)}};
  if (cfg.pe) {
    echo["pe"] = *cfg.pe;
  }
  echo["pe_grid"] = grid_string(cfg.pe_grid);
  echo["key_port"] = cfg.key_port;
  echo["both_ports"] = cfg.both_ports;
  echo["qubit_theta"] = cfg.qubit_theta;
  echo["qubit_phase"] = cfg.qubit_phase;
  echo["alpha"] = cfg.alpha;
  echo["pol_theta"] = cfg.pol_theta;
  echo["m_bases"] = cfg.m_bases;
  echo["grid"] = cfg.grid_points;
  echo["theta"] = cfg.theta;
  // Thread count and artifact paths are deliberately not echoed: results do
  // not depend on them, and the summary must be byte-identical whenever the
  // physics configuration is.

  json summary;
  summary["experiment"] = to_string(cfg.experiment);
  summary["config_echo"] = std::move(echo);
  summary["seed"] = cfg.seed;
  summary["metrics"] = std::move(art.metrics);
  summary["version"] = kVersion;

  RunResult result;
  result.json = summary.dump(2) + "\n";
  result.human_line = std::move(art.human);
  result.csv = std::move(art.csv);
  return result;
}

int run(const RunConfig& cfg) {
  RunResult result;
  try {
    result = run_experiment(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const Error& e) {
    // Domain errors at this level mean the configuration asked for something
    // the physics cannot provide.
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (cfg.json_path.empty()) {
      std::cout << result.json;
    } else {
      std::ofstream out(cfg.json_path, std::ios::binary);
      if (!out || !(out << result.json) || !out.flush()) {
        throw IoError("cannot write JSON summary to '" + cfg.json_path + "'");
      }
    }
    if (!cfg.csv_path.empty()) {
      if (!result.csv) {
        throw IoError("experiment produced no CSV table");
      }
      std::ofstream out(cfg.csv_path, std::ios::binary);
      if (!out || !(out << *result.csv) || !out.flush()) {
        throw IoError("cannot write CSV table to '" + cfg.csv_path + "'");
      }
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  }

  (cfg.json_path.empty() ? std::cerr : std::cout) << result.human_line << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Built-in self test

namespace {

struct Check {
  std::string name;
  std::string detail;
  bool ok = false;
};

Check run_check(const std::string& name, const std::function<void()>& body) {
  Check c{name, "", true};
  try {
    body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = e.what();
  }
  return c;
}

void expect(bool cond, const std::string& what) {
  if (!cond) {
    throw Error(what);
  }
}

}  // namespace

int run_self_check(std::ostream& out) {
  std::vector<Check> checks;

  checks.push_back(run_check("channel matrix is unitary", [] {
    for (const double phi : {0.0, 0.3, 1.1, 1.5707963267948966}) {
      const ChannelParams p{2.2, 4.4, phi};
      expect(channel_matrix(p).unitarity_defect() < 1e-12, "unitarity defect too large");
    }
  }));

  checks.push_back(run_check("correctors recover the qubit on both ports", [] {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
      const double bloch = uniform_unit(rng) * std::numbers::pi;
      const double phase = uniform_unit(rng) * 2.0 * std::numbers::pi;
      const Complex alpha = std::cos(0.5 * bloch);
      const Complex beta = std::polar(std::sin(0.5 * bloch), phase);
      const ChannelParams p{uniform_unit(rng) * 6.28, uniform_unit(rng) * 6.28,
                            0.1 + uniform_unit(rng) * 1.3};
      const PhotonState input = PhotonState::qubit(alpha, beta, ports::kIn);
      const PhotonState out1 = run_fig1_corrector(input, p);
      const PhotonState out2 = run_fig2_corrector(input, p);
      expect(1.0 - fidelity(out1, out2) < 1e-12, "setup outputs disagree");
      for (const std::string& port : {ports::kOut1, ports::kOut2}) {
        const PortCheck c = check_port(out2, alpha, beta, port);
        // Rounding can put the fidelity a hair above 1; the empty-port
        // sentinel (-1) still fails the magnitude test.
        expect(std::abs(c.infidelity) < 1e-12, "recovered qubit is off");
      }
    }
  }));

  checks.push_back(run_check("output masses follow cos^2/sin^2", [] {
    const PhotonState input = PhotonState::qubit(0.6, Complex{0, 0.8}, ports::kIn);
    for (int j = 1; j <= 7; ++j) {
      const double phi = j * 0.19;
      const PhotonState out = run_fig2_corrector(input, ChannelParams{1.0, 2.0, phi});
      const auto [m1, s1] =
          postselect(out, [](const ModeLabel& m) { return m.port == ports::kOut1; });
      expect(std::abs(m1 - std::cos(phi) * std::cos(phi)) < 1e-12, "port-1 mass is off");
    }
  }));

  checks.push_back(run_check("probe attack figures", [] {
    expect(std::abs(fpb_eve_success_probability(0.0) - 0.5) < 1e-12, "success at pe=0");
    expect(std::abs(fpb_eve_success_probability(0.5) - 0.5) < 1e-12, "success at pe=0.5");
    expect(std::abs(fpb_eve_success_probability(0.25) - 0.8535533905932737) < 1e-12,
           "peak success is off");
    const ChannelParams p{0.4, 5.1, 0.9};
    for (const double pe : {0.1, 0.25, 0.4}) {
      const FpbConfig attack(pe);
      for (const AliceChoice choice : {AliceChoice::H, AliceChoice::Plus}) {
        const PhotonState out = fpb_through_corrector(choice, attack, p);
        const double err = conditional_error_probability(out, ports::kOut1, choice);
        expect(std::abs(err - pe) < 1e-12, "conditional error deviates from pe");
      }
    }
  }));

  checks.push_back(run_check("passive corrector splits power correctly", [] {
    const ChannelParams p{1.2, 0.3, 0.8};
    const PassiveRun run = run_fig4_passive(Complex{2.0, 0}, Complex{0, 1.0}, p);
    const CoherentField useful = select_useful_pulse(run.output);
    const double total = 5.0;
    const double s = std::sin(0.8);
    const double c = std::cos(0.8);
    expect(std::abs(useful.slot_power({1, ports::kOut1}) - total * s * s / 4.0) < 1e-12,
           "port-1 useful power is off");
    expect(std::abs(useful.slot_power({1, ports::kOut2}) - total * c * c / 4.0) < 1e-12,
           "port-2 useful power is off");
    expect(std::abs(useful.total_power() + useful.discarded_power() - total) < 1e-12,
           "power accounting does not close");
  }));

  checks.push_back(run_check("multi-basis rounds decode and estimate", [] {
    const MesoscopicConfig mc(3, Complex{3.0, 0});
    const ChannelParams p{0.7, 1.9, 0.6};
    for (int bit = 0; bit <= 1; ++bit) {
      for (int basis = 1; basis <= 3; ++basis) {
        const MesoscopicRound round = run_mesoscopic_round(bit, basis, mc, p);
        expect(round.decoded_bit == bit, "decoded bit differs from sent bit");
        expect(round.detector_power[1 - bit] < 1e-12, "stray power on the wrong detector");
        expect(std::abs(estimate_phi(round.power_port1, round.power_port2) - 0.6) < 1e-12,
               "mixing-angle estimate is off");
      }
    }
  }));

  checks.push_back(run_check("overlap laws and their documented gap", [] {
    const Complex alpha{2.0, 0};
    expect(std::abs(distinguishability_paper(alpha, std::numbers::pi) - 1.0) < 1e-12,
           "quadratic law should return 1 at theta=pi");
    expect(std::abs(distinguishability_exact(alpha, std::numbers::pi) - std::exp(-16.0)) < 1e-12,
           "exact law at theta=pi");
    const double ratio = std::log(distinguishability_exact(alpha, 1e-4)) /
                         std::log(distinguishability_paper(alpha, 1e-4));
    expect(std::abs(ratio - 0.5) < 1e-6, "small-angle exponent ratio");
  }));

  bool all_ok = true;
  for (const Check& c : checks) {
    if (c.ok) {
      out << "ok - " << c.name << "\n";
    } else {
      all_ok = false;
      out << "FAIL - " << c.name << ": " << c.detail << "\n";
    }
  }
  out << (all_ok ? "self check passed" : "self check FAILED") << " (" << checks.size()
      << " checks)\n";
  return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace polqec
