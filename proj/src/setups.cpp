#include "polqec/setups.hpp"

#include <utility>

#include "polqec/components.hpp"
#include "polqec/errors.hpp"

namespace polqec {

namespace {

// Internal arm/port names. They appear in traces, never in public outputs.
const std::string kArmA = "arm_a";
const std::string kArmB = "arm_b";
const std::string kRaw1 = "raw1";
const std::string kRaw2 = "raw2";
const std::string kSenderShort = "snd_s";
const std::string kSenderLong = "snd_l";

std::string single_port_of(const PhotonState& s) {
  std::string port;
  for (const auto& [label, amp] : s.terms()) {
    if (port.empty()) {
      port = label.port;
    } else if (label.port != port) {
      throw StructureError("state spans ports '" + port + "' and '" + label.port + "'");
    }
  }
  return port;
}

PhotonState move_port(const PhotonState& s, const std::string& from, const std::string& to) {
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != from) {
      return m;
    }
    ModeLabel out = m;
    out.port = to;
    return out;
  });
}

// Multiplies every slot on `port` by an exact complex factor. Used for the
// sender's quarter-wave modulator, whose factor is -i by construction; going
// through polar(1, -pi/2) would leave a ~1e-16 real residue instead.
CoherentField scale_port(const CoherentField& f, const std::string& port, Complex factor) {
  CoherentField::SlotMap out;
  for (const auto& [key, amps] : f.slots()) {
    if (key.port == port) {
      out[key] = {amps.h * factor, amps.v * factor};
    } else {
      out[key] = amps;
    }
  }
  return with_slots(f, std::move(out));
}

// Receiver of the simplified corrector, optionally recording stages.
PhotonState fig2_receiver_impl(const PhotonState& channel_out, SetupTrace* trace) {
  const std::string in_port = single_port_of(channel_out);

  // Split by polarization, then flip the early bin on the vertical branch and
  // the late bin on the horizontal branch.
  PhotonState s = pbs(channel_out, in_port, kRaw2, kRaw1);
  s = pockels_flip(s, kRaw1, 0);
  s = pockels_flip(s, kRaw2, 1);
  if (trace != nullptr) {
    trace->add("split_flip", s);
  }

  // Per-branch unbalanced interferometers (horizontal takes the long arm)
  // merge each branch into the delay-1 bin.
  s = delay_arm(s, kRaw1, Pol::H);
  s = delay_arm(s, kRaw2, Pol::H);
  if (trace != nullptr) {
    trace->add("bob_out_raw", s);
  }

  // Canonical labeling: the branch carrying the cos(phi) mass is port 1.
  s = s.relabeled([](const ModeLabel& m) {
    ModeLabel out = m;
    if (m.port == kRaw2) {
      out.port = ports::kOut1;
    } else if (m.port == kRaw1) {
      out.port = ports::kOut2;
    }
    return out;
  });
  if (trace != nullptr) {
    trace->add("output", s);
  }
  return s;
}

PhotonState fig1_receiver_impl(const PhotonState& channel_out, SetupTrace* trace) {
  const std::string in_port = single_port_of(channel_out);

  // First time-gated cell: the early bin gets H<->V.
  PhotonState s = pockels_flip(channel_out, in_port, 0);
  if (trace != nullptr) {
    trace->add("gate_flip", s);
  }

  // Balanced interferometer: split by polarization, flip the early bin in one
  // arm and the late bin in the other, recombine on a second splitter. This
  // routes both lambda-phased terms to port 1 and both xi-phased terms to
  // port 2 while arm lengths stay equal.
  s = pbs(s, in_port, kArmA, kArmB);
  s = pockels_flip(s, kArmA, 0);
  s = pockels_flip(s, kArmB, 1);
  s = pbs(s, kArmA, ports::kOut1, ports::kOut2);
  s = pbs(s, kArmB, ports::kOut2, ports::kOut1);
  if (trace != nullptr) {
    trace->add("balanced_out", s);
  }

  // Per-port unbalanced interferometers (vertical takes the long arm) merge
  // everything into the delay-1 bin...
  s = delay_arm(s, ports::kOut1, Pol::V);
  s = delay_arm(s, ports::kOut2, Pol::V);
  if (trace != nullptr) {
    trace->add("delay_merge", s);
  }

  // ...and the final half-wave plates restore the original polarization.
  s = hwp_swap(s, ports::kOut1);
  s = hwp_swap(s, ports::kOut2);
  if (trace != nullptr) {
    trace->add("output", s);
  }
  return s;
}

PhotonState encode_and_send(const PhotonState& qubit, const ChannelParams& p,
                            SetupTrace* trace) {
  PhotonState s = encode_alice(qubit);
  if (trace != nullptr) {
    trace->add("encoded", s);
  }
  s = move_port(s, single_port_of(s), ports::kChannel);
  s = apply_channel(s, p);
  if (trace != nullptr) {
    trace->add("channel_out", s);
  }
  return s;
}

}  // namespace

PhotonState encode_alice(const PhotonState& qubit) {
  const std::string port = single_port_of(qubit);
  for (const auto& [label, amp] : qubit.terms()) {
    if (label.delay != 0) {
      throw StructureError("encoder input must sit in a single time bin");
    }
  }
  // Vertical component to the long arm, then flip the late bin: the qubit
  // becomes two horizontally polarized time bins.
  PhotonState s = delay_arm(qubit, port, Pol::V);
  return pockels_flip(s, port, 1);
}

PhotonState run_fig1_corrector(const PhotonState& qubit, const ChannelParams& p) {
  return fig1_receiver_impl(encode_and_send(qubit, p, nullptr), nullptr);
}

CorrectorRun run_fig1_corrector_traced(const PhotonState& qubit, const ChannelParams& p) {
  SetupTrace trace;
  PhotonState sent = encode_and_send(qubit, p, &trace);
  PhotonState output = fig1_receiver_impl(sent, &trace);
  return CorrectorRun{std::move(output), std::move(trace)};
}

PhotonState run_fig2_corrector(const PhotonState& qubit, const ChannelParams& p) {
  return fig2_receiver_impl(encode_and_send(qubit, p, nullptr), nullptr);
}

CorrectorRun run_fig2_corrector_traced(const PhotonState& qubit, const ChannelParams& p) {
  SetupTrace trace;
  PhotonState sent = encode_and_send(qubit, p, &trace);
  PhotonState output = fig2_receiver_impl(sent, &trace);
  return CorrectorRun{std::move(output), std::move(trace)};
}

PhotonState fig2_receiver(const PhotonState& channel_out) {
  return fig2_receiver_impl(channel_out, nullptr);
}

PassiveRun run_fig4_passive(Complex alpha_h, Complex alpha_v, const ChannelParams& p) {
  PassiveRun run;
  CoherentField f = CoherentField::single_pulse(alpha_h, alpha_v, ports::kIn);
  run.trace.add("prepared", f);

  // Sender: split by polarization; the vertical component takes the long arm
  // and is rotated back to horizontal, the horizontal one picks up a -pi/2
  // modulator phase that pre-compensates the coupler's reflection phase. The
  // coupler then recombines both pulses into the fiber; its second output is
  // lost, which costs half the power.
  f = pbs(f, ports::kIn, kSenderShort, kSenderLong);
  f = scale_port(f, kSenderShort, Complex{0, -1});
  f = delay_arm(f, kSenderLong, Pol::V);
  f = hwp_swap(f, kSenderLong);
  f = coupler_50_50(f, kSenderLong, kSenderShort, ports::kChannel, ports::kDiscard);
  f = f.with_port_discarded(ports::kDiscard);
  run.trace.add("channel_in", f);

  f = apply_channel(f, p);
  run.trace.add("channel_out", f);

  // Receiver: split by polarization (vertical -> port 1, horizontal ->
  // port 2), rotate each branch onto the diagonal so both polarizations are
  // populated equally...
  f = pbs(f, ports::kChannel, ports::kOut2, ports::kOut1);
  run.trace.add("receiver_split", f);
  const PolarizationUnitary to_diagonal_1{{Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                                           Complex{-kInvSqrt2, 0}, Complex{kInvSqrt2, 0}}};
  const PolarizationUnitary to_diagonal_2{{Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0},
                                           Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}}};
  f = apply_polarization_unitary(f, ports::kOut1, to_diagonal_1);
  f = apply_polarization_unitary(f, ports::kOut2, to_diagonal_2);
  run.trace.add("rotated", f);

  // ...so the per-port unbalanced interferometers overlap the early pulse's
  // horizontal component with the late pulse's vertical one in the delay-1
  // slot, which thereby reproduces the input polarization on both ports.
  f = delay_arm(f, ports::kOut1, Pol::H);
  f = delay_arm(f, ports::kOut2, Pol::H);
  run.trace.add("output", f);

  run.output = f;
  return run;
}

CoherentField select_useful_pulse(const CoherentField& f) {
  return f.filtered([](const SlotKey& key) { return key.delay == 1; });
}

PhotonState time_multiplex(const PhotonState& s, const std::string& from_port,
                           const std::string& to_port, int delay_offset) {
  return s.relabeled([&](const ModeLabel& m) {
    if (m.port != from_port) {
      return m;
    }
    ModeLabel out = m;
    out.port = to_port;
    out.delay += delay_offset;
    return out;
  });
}

}  // namespace polqec
