#ifndef POLQEC_SETUPS_HPP
#define POLQEC_SETUPS_HPP

#include <string>

#include "polqec/channel.hpp"
#include "polqec/coherent_field.hpp"
#include "polqec/photon_state.hpp"
#include "polqec/trace.hpp"

namespace polqec {

// Canonical port names used by the setup pipelines.
namespace ports {
inline const std::string kIn = "in";        // source / encoder input
inline const std::string kChannel = "ch";   // the fiber
inline const std::string kOut1 = "1";       // receiver output 1 (cos branch of the
                                            // correctors, sin branch of the passive setup)
inline const std::string kOut2 = "2";       // receiver output 2 (the other branch)
inline const std::string kDiscard = "tap";  // unused coupler output at the sender
}  // namespace ports

// Both single-photon correctors emit the recovered qubit at delay 1 on two
// output ports. The active corrector's own output labeling already puts the
// cos(phi) branch on port "1"; the simplified corrector internally produces
// the mirrored labeling, so its public output applies the fixed relabeling
// 1<->2 to make "port 1 carries cos^2(phi)" hold for both. The raw labeling
// survives in the trace stage "bob_out_raw".

/// Sender-side encoder: a polarization qubit at delay 0 becomes a pair of
/// horizontally polarized time bins on the same port,
/// alpha|H,0> + beta|V,0>  ->  alpha|H,0> + beta|H,1>.
/// The vertical component takes the long arm and is then flipped by the
/// time-gated cell. Throws StructureError when the input is already
/// time-binned or spread over several ports.
PhotonState encode_alice(const PhotonState& qubit);

struct CorrectorRun {
  PhotonState output;
  SetupTrace trace;
};

/// Active corrector, full version. Stages traced, in order:
///   "encoded"        time-bin encoded sender output
///   "channel_out"    after the fiber
///   "gate_flip"      receiver's first time-gated flip (early bin swapped)
///   "balanced_out"   after the balanced interferometer with per-arm gates
///   "delay_merge"    after the per-port unbalanced interferometers
///   "output"         after the half-wave plates = public output
PhotonState run_fig1_corrector(const PhotonState& qubit, const ChannelParams& p);
CorrectorRun run_fig1_corrector_traced(const PhotonState& qubit, const ChannelParams& p);

/// Simplified corrector: one splitter, two time-gated cells, two unbalanced
/// interferometers. Stages traced: "encoded", "channel_out", "split_flip"
/// (after the splitter and both gates), "bob_out_raw" (native labeling),
/// "output" (canonical labeling).
PhotonState run_fig2_corrector(const PhotonState& qubit, const ChannelParams& p);
CorrectorRun run_fig2_corrector_traced(const PhotonState& qubit, const ChannelParams& p);

/// Receiver half of the simplified corrector, usable on any state already at
/// the channel output (including probe-entangled ones). Output uses the
/// canonical port labeling.
PhotonState fig2_receiver(const PhotonState& channel_out);

struct PassiveRun {
  CoherentField output;
  SetupTrace trace;
};

/// Passive corrector for coherent pulses. The input pulse |alpha_h, alpha_v>
/// is split, time-binned and recombined through a 50/50 coupler (half the
/// power leaves through the unused coupler port and is discarded), sent down
/// the fiber, split again at the receiver and re-merged by per-port
/// unbalanced interferometers. Output slots sit at delays 0, 1, 2 on ports
/// "1" and "2"; the delay-1 slot reproduces the input polarization exactly on
/// both ports. Stages traced: "prepared", "channel_in", "channel_out",
/// "receiver_split", "rotated", "output".
PassiveRun run_fig4_passive(Complex alpha_h, Complex alpha_v, const ChannelParams& p);

/// Keeps only the delay-1 slots (the pulses that took one short and one long
/// arm); earlier and later slots are discarded.
CoherentField select_useful_pulse(const CoherentField& f);

/// Time multiplexing of the two corrector outputs: terms on `from_port` are
/// delayed by `delay_offset` and rerouted to `to_port`, so a single detector
/// pair sees both branches in different time bins.
PhotonState time_multiplex(const PhotonState& s, const std::string& from_port,
                           const std::string& to_port, int delay_offset = 1);

}  // namespace polqec

#endif  // POLQEC_SETUPS_HPP
