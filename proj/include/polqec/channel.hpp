#ifndef POLQEC_CHANNEL_HPP
#define POLQEC_CHANNEL_HPP

#include <numbers>
#include <random>

#include "polqec/coherent_field.hpp"
#include "polqec/photon_state.hpp"
#include "polqec/polarization_unitary.hpp"

namespace polqec {

/// Parameters of the stationary birefringent fiber channel: two phases and a
/// mixing angle. Phases are wrapped into [0, 2pi), the mixing angle is
/// clamped to [0, pi/2].
struct ChannelParams {
  double lambda_phase = 0.0;
  double xi_phase = 0.0;
  double phi_mix = 0.0;

  ChannelParams() = default;
  ChannelParams(double lambda, double xi, double phi);
};

/// The channel unitary. Its first column (the action on horizontal input) is
///
///   H  ->  e^{i lambda} cos(phi) H + e^{i xi} sin(phi) V,
///
/// which is the only part the optical setups in this library ever exercise:
/// every pulse reaching the fiber is horizontally polarized. The second
/// column, (-e^{-i xi} sin(phi), e^{-i lambda} cos(phi)), completes the matrix
/// to SU(2). Any other unitary completion would produce identical pipeline
/// outputs; this one is fixed so the matrix as a whole can be property-tested
/// for unitarity.
PolarizationUnitary channel_matrix(const ChannelParams& p);

/// Propagates through the fiber: the same unitary is applied to every
/// time-bin (the pulse separation is far below the channel's fluctuation
/// time). All terms must sit on a single port; StructureError otherwise.
PhotonState apply_channel(const PhotonState& s, const ChannelParams& p);
CoherentField apply_channel(const CoherentField& f, const ChannelParams& p);

/// How one channel parameter is drawn.
struct ParamSpec {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double value = 0.0;  // Fixed: the value. Uniform: lower bound.
  double upper = 0.0;  // Uniform: upper bound (exclusive).

  static ParamSpec fixed(double v) { return {Kind::Fixed, v, v}; }
  static ParamSpec uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
};

/// Joint sampling configuration for (lambda, xi, phi).
struct ChannelDistribution {
  ParamSpec lambda = ParamSpec::uniform(0.0, 2.0 * std::numbers::pi);
  ParamSpec xi = ParamSpec::uniform(0.0, 2.0 * std::numbers::pi);
  ParamSpec phi = ParamSpec::uniform(0.0, 0.5 * std::numbers::pi);

  /// phi ~ U[0, pi/2], lambda and xi ~ U[0, 2pi).
  static ChannelDistribution defaults() { return {}; }
};

ChannelParams sample_params(std::mt19937_64& rng, const ChannelDistribution& dist);

}  // namespace polqec

#endif  // POLQEC_CHANNEL_HPP
