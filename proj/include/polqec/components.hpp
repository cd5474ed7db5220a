#ifndef POLQEC_COMPONENTS_HPP
#define POLQEC_COMPONENTS_HPP

#include <string>

#include "polqec/coherent_field.hpp"
#include "polqec/photon_state.hpp"
#include "polqec/polarization_unitary.hpp"

namespace polqec {

// The component zoo. Each element is a pure function: mode-label rewrites
// (beam splitters, delay lines, time gates) or 2x2 polarization unitaries
// (wave plates, rotators, the fiber channel). Ports not named by a call are
// left untouched.

/// Polarizing beam splitter: terms on `in_port` are rerouted, H to `out_h`
/// and V to `out_v`, amplitudes unchanged.
PhotonState pbs(const PhotonState& s, const std::string& in_port, const std::string& out_h,
                const std::string& out_v);
CoherentField pbs(const CoherentField& f, const std::string& in_port, const std::string& out_h,
                  const std::string& out_v);

/// Time-gated polarization flip: terms on `port` arriving at `delay_gate`
/// get H<->V; everything else passes through.
PhotonState pockels_flip(const PhotonState& s, const std::string& port, int delay_gate);

/// Unbalanced polarization interferometer: on `port`, the designated
/// polarization takes the long arm (delay += 1), the other one the short arm.
PhotonState delay_arm(const PhotonState& s, const std::string& port, Pol long_path);
CoherentField delay_arm(const CoherentField& f, const std::string& port, Pol long_path);

/// Generic polarization unitary applied to the (H, V) amplitudes on `port`
/// (every time-bin alike).
PhotonState apply_polarization_unitary(const PhotonState& s, const std::string& port,
                                       const PolarizationUnitary& u);
CoherentField apply_polarization_unitary(const CoherentField& f, const std::string& port,
                                         const PolarizationUnitary& u);

/// Polarization rotator by theta on `port`.
PhotonState rotate(const PhotonState& s, const std::string& port, double theta);
CoherentField rotate(const CoherentField& f, const std::string& port, double theta);

/// Half-wave plate modeled as the signless H<->V exchange on `port`.
PhotonState hwp_swap(const PhotonState& s, const std::string& port);
CoherentField hwp_swap(const CoherentField& f, const std::string& port);

/// 50/50 fiber coupler (transmittance 1/sqrt2, reflectance i/sqrt2) between
/// two input ports, per polarization and time-bin:
///   out1 = (in1 + i in2)/sqrt2,  out2 = (i in1 + in2)/sqrt2.
/// Vacuum is assumed on a missing input slot. Defined for coherent fields
/// only; no single-photon setup in this library uses a coupler.
CoherentField coupler_50_50(const CoherentField& f, const std::string& in1,
                            const std::string& in2, const std::string& out1,
                            const std::string& out2);

/// Single-photon overload: always throws UnsupportedKindError.
PhotonState coupler_50_50(const PhotonState& s, const std::string& in1, const std::string& in2,
                          const std::string& out1, const std::string& out2);

/// Multiplies amplitudes on `port` by e^{i phi}.
PhotonState phase_shift(const PhotonState& s, const std::string& port, double phi);
CoherentField phase_shift(const CoherentField& f, const std::string& port, double phi);

}  // namespace polqec

#endif  // POLQEC_COMPONENTS_HPP
