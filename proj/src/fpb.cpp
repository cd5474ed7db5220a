#include "polqec/fpb.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <utility>

#include "polqec/errors.hpp"
#include "polqec/rng.hpp"
#include "polqec/setups.hpp"

namespace polqec {

namespace {

struct QubitOnPort {
  Complex h;
  Complex v;
  int delay;
  std::string port;
};

QubitOnPort extract_qubit(const PhotonState& s) {
  if (s.entangled_with_probe()) {
    throw StructureError("attack input already carries a probe index");
  }
  QubitOnPort q{Complex{0, 0}, Complex{0, 0}, 0, {}};
  bool first = true;
  for (const auto& [label, amp] : s.terms()) {
    if (first) {
      q.delay = label.delay;
      q.port = label.port;
      first = false;
    } else if (label.delay != q.delay || label.port != q.port) {
      throw StructureError("attack input must occupy a single time bin on a single port");
    }
    (label.pol == Pol::H ? q.h : q.v) += amp;
  }
  return q;
}

PhotonState joint_state(const QubitOnPort& q, Complex h_plus, Complex h_minus, Complex v_plus,
                        Complex v_minus) {
  PhotonState::TermMap terms;
  terms[{Pol::H, q.delay, q.port, EveBit::Plus}] = h_plus;
  terms[{Pol::H, q.delay, q.port, EveBit::Minus}] = h_minus;
  terms[{Pol::V, q.delay, q.port, EveBit::Plus}] = v_plus;
  terms[{Pol::V, q.delay, q.port, EveBit::Minus}] = v_minus;
  return PhotonState(std::move(terms));
}

// Signal state orthogonal to `choice` in its own basis, as (H, V) amplitudes.
std::pair<Complex, Complex> flipped_signal(AliceChoice choice) {
  const double r = kInvSqrt2;
  switch (choice) {
    case AliceChoice::H:
      return {Complex{0, 0}, Complex{1, 0}};
    case AliceChoice::V:
      return {Complex{1, 0}, Complex{0, 0}};
    case AliceChoice::Plus:  // orthogonal partner is |->
      return {Complex{r, 0}, Complex{-r, 0}};
    case AliceChoice::Minus:  // orthogonal partner is |+>
      return {Complex{r, 0}, Complex{r, 0}};
  }
  throw RangeError("invalid signal choice");
}

}  // namespace

Basis basis_of(AliceChoice c) {
  return (c == AliceChoice::H || c == AliceChoice::V) ? Basis::Rectilinear : Basis::Diagonal;
}

int bit_of(AliceChoice c) {
  return (c == AliceChoice::V || c == AliceChoice::Minus) ? 1 : 0;
}

std::string to_string(AliceChoice c) {
  switch (c) {
    case AliceChoice::H:
      return "H";
    case AliceChoice::V:
      return "V";
    case AliceChoice::Plus:
      return "+";
    case AliceChoice::Minus:
      return "-";
  }
  return "?";
}

std::string to_string(Basis b) { return b == Basis::Rectilinear ? "rect" : "diag"; }

FpbConfig::FpbConfig(double p_e) : p_e_(p_e) {
  if (!(p_e >= 0.0 && p_e <= 0.5)) {
    throw RangeError("probe disturbance must lie in [0, 0.5]");
  }
  c_ = std::sqrt(1.0 - 2.0 * p_e);
  s_ = std::sqrt(2.0 * p_e);
}

ProbeBranch probe_t_plus(const FpbConfig& cfg) {
  return {Complex{cfg.c(), 0}, Complex{cfg.s() * kInvSqrt2, 0}};
}

ProbeBranch probe_t_minus(const FpbConfig& cfg) {
  return {Complex{cfg.c(), 0}, Complex{-cfg.s() * kInvSqrt2, 0}};
}

ProbeBranch probe_t_err(const FpbConfig& cfg) {
  return {Complex{0, 0}, Complex{cfg.s() * kInvSqrt2, 0}};
}

PhotonState fpb_entangle(const PhotonState& alice, const FpbConfig& cfg) {
  const QubitOnPort q = extract_qubit(alice);
  const double r = kInvSqrt2;
  const ProbeBranch tp = probe_t_plus(cfg);
  const ProbeBranch tm = probe_t_minus(cfg);
  const ProbeBranch te = probe_t_err(cfg);

  // Diagonal-basis coordinates of the input, used to recognize the two
  // diagonal signal states (up to a global phase).
  const Complex d_plus = (q.h + q.v) * r;
  const Complex d_minus = (q.h - q.v) * r;
  const double scale = alice.norm();

  if (std::abs(d_minus) <= kStateTolerance * scale) {
    // Literal form for |+>:  |+> t_plus + |-> t_err, expanded over H/V.
    const Complex g = d_plus * r;
    return joint_state(q, g * (tp.plus + te.plus), g * (tp.minus + te.minus),
                       g * (tp.plus - te.plus), g * (tp.minus - te.minus));
  }
  if (std::abs(d_plus) <= kStateTolerance * scale) {
    // Literal form for |->:  |-> t_minus + |+> t_err.
    const Complex g = d_minus * r;
    return joint_state(q, g * (tm.plus + te.plus), g * (tm.minus + te.minus),
                       g * (-tm.plus + te.plus), g * (-tm.minus + te.minus));
  }

  // Linear extension of the rectilinear rules
  //   |H> -> |H> t_minus + |V> t_err,   |V> -> |V> t_plus + |H> t_err.
  return joint_state(q, q.h * tm.plus, q.h * tm.minus + q.v * te.minus, q.v * tp.plus,
                     q.v * tp.minus + q.h * te.minus);
}

PhotonState signal_qubit(AliceChoice choice, const std::string& port) {
  const double r = kInvSqrt2;
  switch (choice) {
    case AliceChoice::H:
      return PhotonState::qubit(1.0, 0.0, port);
    case AliceChoice::V:
      return PhotonState::qubit(0.0, 1.0, port);
    case AliceChoice::Plus:
      return PhotonState::qubit(r, r, port);
    case AliceChoice::Minus:
      return PhotonState::qubit(r, -r, port);
  }
  throw RangeError("invalid signal choice");
}

PhotonState fpb_entangle_choice(AliceChoice choice, const FpbConfig& cfg,
                                const std::string& port) {
  return fpb_entangle(signal_qubit(choice, port), cfg);
}

double fpb_eve_success_probability(double p_e) {
  if (!(p_e >= 0.0 && p_e <= 0.5)) {
    throw RangeError("probe disturbance must lie in [0, 0.5]");
  }
  const double c = std::sqrt(1.0 - 2.0 * p_e);
  const double s = std::sqrt(2.0 * p_e);
  return 0.5 * (1.0 + std::numbers::sqrt2 * c * s);
}

PhotonState fpb_through_corrector(AliceChoice choice, const FpbConfig& cfg,
                                  const ChannelParams& p) {
  PhotonState s = fpb_entangle_choice(choice, cfg, ports::kIn);
  s = encode_alice(s);
  s = s.relabeled([](const ModeLabel& m) {
    ModeLabel out = m;
    out.port = ports::kChannel;
    return out;
  });
  s = apply_channel(s, p);
  return fig2_receiver(s);
}

double conditional_error_probability(const PhotonState& receiver_output,
                                     const std::string& port, AliceChoice choice) {
  auto [mass, collapsed] = postselect(
      receiver_output, [&](const ModeLabel& m) { return m.port == port; });
  if (!collapsed) {
    throw RangeError("port '" + port + "' carries no amplitude");
  }

  const auto [err_h, err_v] = flipped_signal(choice);
  // Project each (delay, probe) group onto the flipped signal state; the
  // probe branches add incoherently.
  std::map<std::pair<int, std::optional<EveBit>>, Complex> projections;
  for (const auto& [label, amp] : collapsed->terms()) {
    const Complex coeff = label.pol == Pol::H ? std::conj(err_h) : std::conj(err_v);
    projections[{label.delay, label.eve}] += coeff * amp;
  }
  double error_mass = 0.0;
  for (const auto& [group, amp] : projections) {
    error_mass += std::norm(amp);
  }
  return error_mass;
}

EveMeasurement measure_eve(const PhotonState& s, std::mt19937_64& rng) {
  if (!s.entangled_with_probe()) {
    throw StructureError("probe measurement on a probe-free state");
  }
  const double r = kInvSqrt2;

  // Signal-mode amplitudes conditioned on each probe outcome,
  // |0> = (|+> + |->)/sqrt2 and |1> = (|+> - |->)/sqrt2.
  PhotonState::TermMap cond[2];
  for (const auto& [label, amp] : s.terms()) {
    ModeLabel signal = label;
    signal.eve.reset();
    const double sign = label.eve == EveBit::Plus ? 1.0 : (label.eve == EveBit::Minus ? -1.0 : 0.0);
    cond[0][signal] += r * amp;
    cond[1][signal] += sign * r * amp;
  }
  double mass[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    for (const auto& [label, amp] : cond[k]) {
      mass[k] += std::norm(amp);
    }
  }

  const double u = uniform_unit(rng) * (mass[0] + mass[1]);
  const int outcome = (u < mass[0] && mass[0] > 0.0) ? 0 : (mass[1] > 0.0 ? 1 : 0);

  const double scale = 1.0 / std::sqrt(mass[outcome]);
  PhotonState::TermMap collapsed = std::move(cond[outcome]);
  for (auto& [label, amp] : collapsed) {
    amp *= scale;
  }
  return {outcome, PhotonState(std::move(collapsed))};
}

}  // namespace polqec
