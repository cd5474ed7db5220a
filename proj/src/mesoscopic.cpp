#include "polqec/mesoscopic.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <variant>

#include "polqec/components.hpp"
#include "polqec/errors.hpp"
#include "polqec/setups.hpp"

namespace polqec {

namespace {

// Detector ports: source port plus the polarization its splitter sends there.
const std::string kDet1H = "1H";
const std::string kDet1V = "1V";
const std::string kDet2H = "2H";
const std::string kDet2V = "2V";

}  // namespace

StokesMoments stokes_parameters(Complex alpha, double theta) {
  const double n = std::norm(alpha);
  StokesMoments m;
  m.mean = {n * std::cos(2.0 * theta), n * std::sin(2.0 * theta), 0.0};
  m.variance = {n, n, n};
  return m;
}

double distinguishability_paper(Complex alpha, double theta) {
  const double s = std::sin(theta);
  return std::exp(-2.0 * std::norm(alpha) * s * s);
}

double distinguishability_exact(Complex alpha, double theta) {
  return std::exp(-2.0 * std::norm(alpha) * (1.0 - std::cos(theta)));
}

MesoscopicConfig::MesoscopicConfig(int m_bases, Complex alpha)
    : MesoscopicConfig(m_bases, alpha, default_angles(m_bases)) {}

MesoscopicConfig::MesoscopicConfig(int m_bases, Complex alpha, std::vector<double> basis_angles)
    : m_bases_(m_bases), alpha_(alpha), basis_angles_(std::move(basis_angles)) {
  if (m_bases < 1 || m_bases % 2 == 0) {
    throw RangeError("basis count must be a positive odd number");
  }
  if (static_cast<int>(basis_angles_.size()) != m_bases) {
    throw RangeError("need exactly one angle per basis");
  }
}

double MesoscopicConfig::basis_angle(int index) const {
  if (index < 1 || index > m_bases_) {
    throw RangeError("basis index " + std::to_string(index) + " outside 1.." +
                     std::to_string(m_bases_));
  }
  return basis_angles_[static_cast<std::size_t>(index - 1)];
}

std::vector<double> MesoscopicConfig::default_angles(int m_bases) {
  if (m_bases < 1) {
    throw RangeError("basis count must be positive");
  }
  std::vector<double> angles(static_cast<std::size_t>(m_bases));
  for (int k = 0; k < m_bases; ++k) {
    angles[static_cast<std::size_t>(k)] =
        static_cast<double>(k) * std::numbers::pi / (2.0 * m_bases);
  }
  return angles;
}

MesoscopicRound run_mesoscopic_round(int bit, int basis_index, const MesoscopicConfig& cfg,
                                     const ChannelParams& p,
                                     std::optional<int> bob_basis_index) {
  if (bit != 0 && bit != 1) {
    throw RangeError("bit must be 0 or 1");
  }
  const double theta_a = bit * (0.5 * std::numbers::pi) + cfg.basis_angle(basis_index);
  const double theta_b = -cfg.basis_angle(bob_basis_index.value_or(basis_index));

  MesoscopicRound round;
  const Complex ah = cfg.alpha() * std::cos(theta_a);
  const Complex av = cfg.alpha() * std::sin(theta_a);
  round.trace.add("alice_out", CoherentField::single_pulse(ah, av, ports::kIn));

  PassiveRun passive = run_fig4_passive(ah, av, p);
  for (const TraceStage& stage : passive.trace.stages()) {
    std::visit([&](const auto& snapshot) { round.trace.add(stage.label, snapshot); },
               stage.snapshot);
  }

  CoherentField f = select_useful_pulse(passive.output);
  round.trace.add("useful", f);
  round.power_port1 = f.slot_power({1, ports::kOut1});
  round.power_port2 = f.slot_power({1, ports::kOut2});

  // The receiver undoes the sender's basis rotation; with matched bases the
  // pulse polarization is back on the axis of the sent bit.
  f = rotate(f, ports::kOut1, theta_b);
  f = rotate(f, ports::kOut2, theta_b);
  round.trace.add("bob_rotated", f);

  f = pbs(f, ports::kOut1, kDet1H, kDet1V);
  f = pbs(f, ports::kOut2, kDet2H, kDet2V);
  round.trace.add("detectors", f);

  for (const auto& [key, amps] : f.slots()) {
    if (key.port == kDet1H || key.port == kDet2H) {
      round.detector_power[0] += amps.power();
    } else if (key.port == kDet1V || key.port == kDet2V) {
      round.detector_power[1] += amps.power();
    }
  }
  round.decoded_bit = round.detector_power[1] > round.detector_power[0] ? 1 : 0;
  return round;
}

double estimate_phi(double power_port1, double power_port2) {
  if (power_port1 < 0.0 || power_port2 < 0.0) {
    throw RangeError("detector powers cannot be negative");
  }
  if (power_port1 == 0.0 && power_port2 == 0.0) {
    throw EstimateError("both pulse powers vanish; the mixing angle is undetermined");
  }
  return std::atan2(std::sqrt(power_port1), std::sqrt(power_port2));
}

}  // namespace polqec
