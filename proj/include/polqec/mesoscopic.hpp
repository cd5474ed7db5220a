#ifndef POLQEC_MESOSCOPIC_HPP
#define POLQEC_MESOSCOPIC_HPP

#include <array>
#include <optional>
#include <vector>

#include "polqec/channel.hpp"
#include "polqec/coherent_field.hpp"
#include "polqec/trace.hpp"

namespace polqec {

/// Mean values and variances of the three Stokes observables for the linearly
/// polarized coherent pulse |alpha cos(theta), alpha sin(theta)>:
///   means     ( |alpha|^2 cos 2theta,  |alpha|^2 sin 2theta,  0 )
///   variances ( |alpha|^2, |alpha|^2, |alpha|^2 ).
struct StokesMoments {
  std::array<double, 3> mean{};
  std::array<double, 3> variance{};
};
StokesMoments stokes_parameters(Complex alpha, double theta);

/// Squared inner product between |alpha, 0> and its rotation by theta, in the
/// small-angle form exp(-2 |alpha|^2 sin^2 theta). Kept verbatim alongside
/// the exact law below; the two differ (the exact exponent is half this one
/// for small angles, and this form returns 1 at theta = pi).
double distinguishability_paper(Complex alpha, double theta);

/// Exact squared overlap |<alpha,0| R(theta) |alpha,0>|^2
///   = exp(-2 |alpha|^2 (1 - cos theta)).
double distinguishability_exact(Complex alpha, double theta);

/// Protocol configuration: an odd number of polarization bases, the pulse
/// amplitude, and the map from basis index (1-based) to rotation angle. The
/// map is injected configuration; the default spreads the angles evenly over
/// [0, pi/2): index k -> (k-1) pi / (2M).
class MesoscopicConfig {
 public:
  MesoscopicConfig(int m_bases, Complex alpha);
  MesoscopicConfig(int m_bases, Complex alpha, std::vector<double> basis_angles);

  int m_bases() const { return m_bases_; }
  Complex alpha() const { return alpha_; }
  const std::vector<double>& basis_angles() const { return basis_angles_; }
  double basis_angle(int index) const;  // index in {1..M}, RangeError otherwise

  static std::vector<double> default_angles(int m_bases);

 private:
  int m_bases_;
  Complex alpha_;
  std::vector<double> basis_angles_;
};

struct MesoscopicRound {
  int decoded_bit = 0;
  /// Power of the useful (delay-1) pulse on each receiver port.
  double power_port1 = 0.0;
  double power_port2 = 0.0;
  /// Detector powers after the final splitter, summed over both ports:
  /// index 0 = horizontal detector, 1 = vertical detector.
  std::array<double, 2> detector_power{};
  SetupTrace trace;
};

/// One protocol round: the sender rotates |alpha, 0> by
/// bit * pi/2 + basis_angle, the pulse passes the passive corrector, the
/// early/late pulses are discarded, the receiver undoes the basis rotation
/// and splits onto two detectors. With matched bases all power lands on the
/// detector of the sent bit. `bob_basis_index` defaults to the sender's
/// index; a mismatched index is allowed and simply yields split powers.
/// Stages traced: "alice_out", passive stages, "useful", "bob_rotated",
/// "detectors".
MesoscopicRound run_mesoscopic_round(int bit, int basis_index, const MesoscopicConfig& cfg,
                                     const ChannelParams& p,
                                     std::optional<int> bob_basis_index = std::nullopt);

/// Channel mixing-angle estimate from the two useful-pulse powers:
/// atan2(sqrt(p1), sqrt(p2)), in [0, pi/2]. Port 1 carries the sin(phi)
/// branch. Throws EstimateError when both powers vanish, RangeError on
/// negative input.
double estimate_phi(double power_port1, double power_port2);

}  // namespace polqec

#endif  // POLQEC_MESOSCOPIC_HPP
