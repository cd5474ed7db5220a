#include "polqec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polqec/components.hpp"
#include "polqec/errors.hpp"
#include "polqec/rng.hpp"

namespace polqec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double x) {
  double w = std::fmod(x, kTwoPi);
  if (w < 0.0) {
    w += kTwoPi;
  }
  return w;
}

template <typename State>
std::string single_port_of(const State& s);

template <>
std::string single_port_of(const PhotonState& s) {
  std::string port;
  for (const auto& [label, amp] : s.terms()) {
    if (port.empty()) {
      port = label.port;
    } else if (label.port != port) {
      throw StructureError("fiber input spans ports '" + port + "' and '" + label.port + "'");
    }
  }
  return port;
}

template <>
std::string single_port_of(const CoherentField& f) {
  std::string port;
  for (const auto& [key, amps] : f.slots()) {
    if (port.empty()) {
      port = key.port;
    } else if (key.port != port) {
      throw StructureError("fiber input spans ports '" + port + "' and '" + key.port + "'");
    }
  }
  return port;
}

double draw(std::mt19937_64& rng, const ParamSpec& spec) {
  if (spec.kind == ParamSpec::Kind::Fixed) {
    return spec.value;
  }
  return spec.value + uniform_unit(rng) * (spec.upper - spec.value);
}

}  // namespace

ChannelParams::ChannelParams(double lambda, double xi, double phi)
    : lambda_phase(wrap_phase(lambda)),
      xi_phase(wrap_phase(xi)),
      phi_mix(std::clamp(phi, 0.0, 0.5 * std::numbers::pi)) {}

PolarizationUnitary channel_matrix(const ChannelParams& p) {
  const double c = std::cos(p.phi_mix);
  const double s = std::sin(p.phi_mix);
  const Complex el = std::polar(1.0, p.lambda_phase);
  const Complex ex = std::polar(1.0, p.xi_phase);
  return {{el * c, -std::conj(ex) * s, ex * s, std::conj(el) * c}};
}

PhotonState apply_channel(const PhotonState& s, const ChannelParams& p) {
  return apply_polarization_unitary(s, single_port_of(s), channel_matrix(p));
}

CoherentField apply_channel(const CoherentField& f, const ChannelParams& p) {
  return apply_polarization_unitary(f, single_port_of(f), channel_matrix(p));
}

ChannelParams sample_params(std::mt19937_64& rng, const ChannelDistribution& dist) {
  // Fixed draw order (lambda, xi, phi) keeps runs reproducible.
  const double lambda = draw(rng, dist.lambda);
  const double xi = draw(rng, dist.xi);
  const double phi = draw(rng, dist.phi);
  return {lambda, xi, phi};
}

}  // namespace polqec
