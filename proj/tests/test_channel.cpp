#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "polqec/channel.hpp"
#include "polqec/components.hpp"
#include "polqec/errors.hpp"
#include "polqec/rng.hpp"

#include "oracles.hpp"

using namespace polqec;

namespace {

ModeLabel mode(Pol pol, int delay, const std::string& port) {
  return ModeLabel{pol, delay, port, std::nullopt};
}

}  // namespace

TEST_CASE("channel matrix matches its closed form") {
  const ChannelParams p{0.9, 2.1, 0.7};
  const PolarizationUnitary u = channel_matrix(p);
  const double c = std::cos(0.7);
  const double s = std::sin(0.7);
  // Column 1: action on |H>; column 2: action on |V>.
  CHECK(std::abs(u.m[0] - std::polar(c, 0.9)) < 1e-15);
  CHECK(std::abs(u.m[2] - std::polar(s, 2.1)) < 1e-15);
  CHECK(std::abs(u.m[1] + std::polar(s, -2.1)) < 1e-15);
  CHECK(std::abs(u.m[3] - std::polar(c, -0.9)) < 1e-15);
}

TEST_CASE("channel matrix is unitary across the parameter space") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const ChannelParams p = oracles::random_channel(rng);
    CHECK(channel_matrix(p).unitarity_defect() < 1e-14);
  }
  // Edge values of the mixing angle.
  CHECK(channel_matrix(ChannelParams{1.0, 2.0, 0.0}).unitarity_defect() < 1e-14);
  CHECK(channel_matrix(ChannelParams{1.0, 2.0, std::numbers::pi / 2}).unitarity_defect() <
        1e-14);
}

TEST_CASE("parameters wrap phases and clamp the mixing angle") {
  const double two_pi = 2.0 * std::numbers::pi;
  const ChannelParams p{two_pi + 0.5, -0.5, 2.0};
  CHECK(p.lambda_phase == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.xi_phase == doctest::Approx(two_pi - 0.5).epsilon(1e-12));
  CHECK(p.phi_mix == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(ChannelParams{0.0, 0.0, -1.0}.phi_mix == 0.0);
}

TEST_CASE("identity limits of the channel") {
  // phi = 0, lambda = 0: H and V pass through unchanged.
  const PhotonState s = PhotonState::qubit(Complex{0.6, 0.0}, Complex{0.0, 0.8}, "ch");
  const PhotonState out = apply_channel(s, ChannelParams{0.0, 0.0, 0.0});
  CHECK(fidelity(out, s) == doctest::Approx(1.0).epsilon(1e-13));

  // phi = pi/2: full polarization exchange (up to phases).
  const PhotonState h = PhotonState::qubit(1.0, 0.0, "ch");
  const PhotonState flipped = apply_channel(h, ChannelParams{0.0, 0.0, std::numbers::pi / 2});
  CHECK(std::abs(flipped.amplitude(mode(Pol::V, 0, "ch"))) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("channel acts per time bin, delay-blind") {
  PhotonState::TermMap terms;
  terms[mode(Pol::H, 0, "ch")] = Complex{kInvSqrt2, 0.0};
  terms[mode(Pol::H, 1, "ch")] = Complex{kInvSqrt2, 0.0};
  const PhotonState s{std::move(terms)};
  const ChannelParams p{0.4, 1.3, 0.9};
  const PhotonState out = apply_channel(s, p);
  // Both bins see the same unitary: amplitude pattern is identical.
  CHECK(std::abs(out.amplitude(mode(Pol::H, 0, "ch")) - out.amplitude(mode(Pol::H, 1, "ch"))) <
        1e-15);
  CHECK(std::abs(out.amplitude(mode(Pol::V, 0, "ch")) - out.amplitude(mode(Pol::V, 1, "ch"))) <
        1e-15);
  CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("channel requires a single populated port") {
  PhotonState::TermMap terms;
  terms[mode(Pol::H, 0, "a")] = Complex{kInvSqrt2, 0.0};
  terms[mode(Pol::H, 0, "b")] = Complex{kInvSqrt2, 0.0};
  const PhotonState two_ports{std::move(terms)};
  CHECK_THROWS_AS(apply_channel(two_ports, ChannelParams{0.1, 0.2, 0.3}), StructureError);

  const CoherentField f1 = CoherentField::single_pulse(Complex{1, 0}, Complex{0, 0}, "a");
  CoherentField::SlotMap slots = f1.slots();
  slots[SlotKey{0, "b"}] = SlotAmplitudes{Complex{1, 0}, Complex{0, 0}};
  const CoherentField two_port_field = with_slots(f1, std::move(slots));
  CHECK_THROWS_AS(apply_channel(two_port_field, ChannelParams{0.1, 0.2, 0.3}), StructureError);
}

TEST_CASE("channel preserves field power") {
  const CoherentField f = CoherentField::single_pulse(Complex{1.5, 0.5}, Complex{0.0, 2.0}, "ch");
  const CoherentField out = apply_channel(f, ChannelParams{1.0, 2.0, 0.8});
  CHECK(out.total_power() == doctest::Approx(f.total_power()).epsilon(1e-13));
}

TEST_CASE("parameter specs: fixed consumes no randomness") {
  ChannelDistribution dist;
  dist.lambda = ParamSpec::fixed(1.0);
  dist.xi = ParamSpec::fixed(2.0);
  dist.phi = ParamSpec::fixed(0.5);
  std::mt19937_64 a(9), b(9);
  const ChannelParams p = sample_params(a, dist);
  CHECK(p.lambda_phase == 1.0);
  CHECK(p.xi_phase == 2.0);
  CHECK(p.phi_mix == 0.5);
  CHECK(a() == b());  // generator untouched
}

TEST_CASE("parameter specs: uniform stays inside its bounds") {
  const ChannelDistribution dist = ChannelDistribution::defaults();
  std::mt19937_64 rng(123);
  for (int t = 0; t < 2000; ++t) {
    const ChannelParams p = sample_params(rng, dist);
    CHECK(p.lambda_phase >= 0.0);
    CHECK(p.lambda_phase < 2.0 * std::numbers::pi);
    CHECK(p.xi_phase >= 0.0);
    CHECK(p.xi_phase < 2.0 * std::numbers::pi);
    CHECK(p.phi_mix >= 0.0);
    CHECK(p.phi_mix <= std::numbers::pi / 2);
  }
}

TEST_CASE("sampling is reproducible for equal generator state") {
  const ChannelDistribution dist = ChannelDistribution::defaults();
  std::mt19937_64 a(55), b(55);
  for (int t = 0; t < 100; ++t) {
    const ChannelParams pa = sample_params(a, dist);
    const ChannelParams pb = sample_params(b, dist);
    CHECK(pa.lambda_phase == pb.lambda_phase);
    CHECK(pa.xi_phase == pb.xi_phase);
    CHECK(pa.phi_mix == pb.phi_mix);
  }
}

TEST_CASE("mixed-angle mean of cos^2 tends to 1/2 under the default prior") {
  // Sanity link to the uniform-phi limit: E[cos^2 phi] over U[0, pi/2] = 1/2.
  const ChannelDistribution dist = ChannelDistribution::defaults();
  std::mt19937_64 rng(321);
  const int n = 200000;
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    const double c = std::cos(sample_params(rng, dist).phi_mix);
    acc += c * c;
  }
  // Var[cos^2 phi] = 1/8 for phi ~ U[0, pi/2]; 3 sigma of the mean estimate.
  const double bound = 3.0 * std::sqrt(0.125 / n);
  CHECK(std::abs(acc / n - 0.5) < bound);
}
