#ifndef POLQEC_FPB_HPP
#define POLQEC_FPB_HPP

#include <numbers>
#include <random>
#include <string>

#include "polqec/channel.hpp"
#include "polqec/photon_state.hpp"

namespace polqec {

/// The four signal states of the polarimetric key-distribution protocol.
enum class AliceChoice { H, V, Plus, Minus };

/// Rectilinear = {H, V}, Diagonal = {+, -}.
enum class Basis { Rectilinear, Diagonal };

Basis basis_of(AliceChoice c);
int bit_of(AliceChoice c);  // H, + -> 0;  V, - -> 1
std::string to_string(AliceChoice c);
std::string to_string(Basis b);

/// Fresh signal qubit for one choice, at delay 0 on `port`.
PhotonState signal_qubit(AliceChoice choice, const std::string& port);

/// Individual-attack configuration: the probe-induced disturbance p_e in
/// [0, 0.5] and the derived probe coefficients c = sqrt(1 - 2 p_e),
/// s = sqrt(2 p_e). The eavesdropper measures her probe in a fixed basis
/// rotated by pi/8 from rectilinear; the probe states |+>, |-> used below are
/// the diagonal states of that measurement frame, so the probe algebra never
/// needs the angle explicitly.
class FpbConfig {
 public:
  explicit FpbConfig(double p_e);

  double p_e() const { return p_e_; }
  double c() const { return c_; }
  double s() const { return s_; }

  static constexpr double kMeasurementBasisAngle = std::numbers::pi / 8.0;

 private:
  double p_e_;
  double c_;
  double s_;
};

/// Probe branch vectors in the (plus, minus) probe coordinates:
/// t_plus = (c, s/sqrt2), t_minus = (c, -s/sqrt2), t_err = (0, s/sqrt2).
struct ProbeBranch {
  Complex plus;
  Complex minus;
};
ProbeBranch probe_t_plus(const FpbConfig& cfg);
ProbeBranch probe_t_minus(const FpbConfig& cfg);
ProbeBranch probe_t_err(const FpbConfig& cfg);

/// Joint photon-probe state right after the attack, for a polarization qubit
/// at delay 0 on a single port. The four signal states map to
///
///   |H>  ->  |H> t_minus + |V> t_err        |+>  ->  |+> t_plus  + |-> t_err
///   |V>  ->  |V> t_plus  + |H> t_err        |->  ->  |-> t_minus + |+> t_err
///
/// A general qubit is handled by linear extension of the rectilinear pair;
/// inputs matching a diagonal signal state are recognized and given the
/// diagonal form above, which fixes the (unobservable) sign convention of the
/// error branch for those two states.
PhotonState fpb_entangle(const PhotonState& alice, const FpbConfig& cfg);

/// Same attack, selected by choice label, on a fresh qubit at `port`.
PhotonState fpb_entangle_choice(AliceChoice choice, const FpbConfig& cfg,
                                const std::string& port);

/// Probability that the eavesdropper's probe measurement identifies the bit:
/// 0.5 (1 + sqrt2 c s). Equals 0.5 at p_e in {0, 0.5} and peaks at p_e = 0.25.
double fpb_eve_success_probability(double p_e);

/// Full attacked round, analytically: attack at the sender's output, time-bin
/// encoding, fiber, simplified corrector. Returns the joint state at the
/// receiver output (canonical ports, everything at delay 1).
PhotonState fpb_through_corrector(AliceChoice choice, const FpbConfig& cfg,
                                  const ChannelParams& p);

/// Probability that the receiver, post-selected on `port` and measuring in
/// the signal's own basis, reads the flipped bit. Throws RangeError when the
/// port carries no amplitude.
double conditional_error_probability(const PhotonState& receiver_output,
                                     const std::string& port, AliceChoice choice);

struct EveMeasurement {
  int outcome = 0;  // 0 or 1, in the probe measurement basis
  PhotonState collapsed;
};

/// Projective measurement of the probe in its measurement basis
/// (|0> = (|+> + |->)/sqrt2, |1> = (|+> - |->)/sqrt2).
EveMeasurement measure_eve(const PhotonState& s, std::mt19937_64& rng);

}  // namespace polqec

#endif  // POLQEC_FPB_HPP
