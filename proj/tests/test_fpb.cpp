#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "polqec/errors.hpp"
#include "polqec/fpb.hpp"
#include "polqec/rng.hpp"
#include "polqec/setups.hpp"

#include "oracles.hpp"

using namespace polqec;

namespace {

constexpr AliceChoice kAllChoices[] = {AliceChoice::H, AliceChoice::V, AliceChoice::Plus,
                                       AliceChoice::Minus};

// Mass of the error branch: project the joint state onto the signal flipped
// within its own basis, summed over probe components.
double flip_mass(const PhotonState& joint, AliceChoice choice) {
  return conditional_error_probability(joint, ports::kIn, choice);
}

}  // namespace

TEST_CASE("configuration validates its range") {
  CHECK_NOTHROW(FpbConfig(0.0));
  CHECK_NOTHROW(FpbConfig(0.5));
  CHECK_THROWS_AS(FpbConfig(-0.01), RangeError);
  CHECK_THROWS_AS(FpbConfig(0.7), RangeError);
  const FpbConfig cfg(0.25);
  CHECK(cfg.c() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(cfg.s() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("probe branches are unit-coherent with the closed form") {
  const FpbConfig cfg(0.1);
  const double c = std::sqrt(1.0 - 0.2);
  const double s = std::sqrt(0.2);
  const ProbeBranch tp = probe_t_plus(cfg);
  const ProbeBranch tm = probe_t_minus(cfg);
  const ProbeBranch te = probe_t_err(cfg);
  CHECK(std::abs(tp.plus - Complex{c, 0.0}) < 1e-15);
  CHECK(std::abs(tp.minus - Complex{s * kInvSqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(tm.plus - Complex{c, 0.0}) < 1e-15);
  CHECK(std::abs(tm.minus + Complex{s * kInvSqrt2, 0.0}) < 1e-15);
  CHECK(std::abs(te.plus) < 1e-15);
  CHECK(std::abs(te.minus - Complex{s * kInvSqrt2, 0.0}) < 1e-15);
}

TEST_CASE("entangling preserves the norm for all four signals") {
  for (const double pe : {0.0, 0.1, 0.25, 0.4, 0.5}) {
    const FpbConfig cfg(pe);
    for (const AliceChoice choice : kAllChoices) {
      const PhotonState joint = fpb_entangle_choice(choice, cfg, ports::kIn);
      CHECK(joint.entangled_with_probe());
      CHECK(joint.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("flip mass equals the disturbance parameter for every signal") {
  for (const double pe : {0.0, 0.05, 0.25, 0.37, 0.5}) {
    const FpbConfig cfg(pe);
    for (const AliceChoice choice : kAllChoices) {
      const PhotonState joint = fpb_entangle_choice(choice, cfg, ports::kIn);
      CHECK(std::abs(flip_mass(joint, choice) - pe) < 1e-12);
    }
  }
}

TEST_CASE("attack on a general qubit extends the rectilinear action linearly") {
  const FpbConfig cfg(0.2);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto [alpha, beta] = oracles::random_qubit(rng);
    const PhotonState joint =
        fpb_entangle(PhotonState::qubit(alpha, beta, ports::kIn), cfg);
    // Linearity against the basis actions: amplitudes must combine exactly.
    const PhotonState jh = fpb_entangle_choice(AliceChoice::H, cfg, ports::kIn);
    const PhotonState jv = fpb_entangle_choice(AliceChoice::V, cfg, ports::kIn);
    for (const auto& [label, amp] : joint.terms()) {
      const Complex expected = alpha * jh.amplitude(label) + beta * jv.amplitude(label);
      CHECK(std::abs(amp - expected) < 1e-12);
    }
  }
}

TEST_CASE("diagonal signals take the symmetric diagonal form") {
  // For |+> and |-> the error branch must sit entirely on the flipped
  // diagonal state: the component of |+> input on (|-> signal, T_plus or
  // T_minus probe) vanishes identically, and vice versa.
  const FpbConfig cfg(0.3);
  const PhotonState plus = fpb_entangle_choice(AliceChoice::Plus, cfg, ports::kIn);

  // Project onto the |-> signal (H - V)/sqrt2 for each probe component.
  for (const EveBit eve : {EveBit::Plus, EveBit::Minus}) {
    const Complex h = plus.amplitude(ModeLabel{Pol::H, 0, ports::kIn, eve});
    const Complex v = plus.amplitude(ModeLabel{Pol::V, 0, ports::kIn, eve});
    const Complex minus_component = (h - v) * kInvSqrt2;
    if (eve == EveBit::Plus) {
      // T_err lives only on the probe |-> axis; signal |-> with probe |+> is
      // forbidden by the attack structure.
      CHECK(std::abs(minus_component) < 1e-15);
    } else {
      CHECK(std::abs(minus_component) ==
            doctest::Approx(std::sqrt(0.6) * kInvSqrt2).epsilon(1e-12));
    }
  }
}

TEST_CASE("success probability closed form and shape") {
  CHECK(fpb_eve_success_probability(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fpb_eve_success_probability(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(fpb_eve_success_probability(0.25) - 0.8535533905932737) < 1e-12);
  CHECK_THROWS_AS(fpb_eve_success_probability(0.6), RangeError);

  // The maximum sits at pe = 0.25 (located independently).
  const double argmax =
      oracles::golden_max([](double pe) { return fpb_eve_success_probability(pe); }, 0.0, 0.5);
  CHECK(std::abs(argmax - 0.25) < 1e-5);
}

TEST_CASE("attacked round through the corrector keeps unit norm") {
  const ChannelParams p{0.8, 1.7, 0.5};
  const FpbConfig cfg(0.25);
  for (const AliceChoice choice : kAllChoices) {
    const PhotonState out = fpb_through_corrector(choice, cfg, p);
    CHECK(out.entangled_with_probe());
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [label, amp] : out.terms()) {
      CHECK(label.delay == 1);
    }
  }
}

TEST_CASE("conditional error equals the disturbance on both output ports") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 25; ++t) {
    const ChannelParams p{uniform_unit(rng) * 6.2, uniform_unit(rng) * 6.2,
                          0.15 + uniform_unit(rng) * 1.2};
    for (const double pe : {0.1, 0.25}) {
      const FpbConfig cfg(pe);
      for (const AliceChoice choice : kAllChoices) {
        const PhotonState out = fpb_through_corrector(choice, cfg, p);
        CHECK(std::abs(conditional_error_probability(out, ports::kOut1, choice) - pe) < 1e-12);
        CHECK(std::abs(conditional_error_probability(out, ports::kOut2, choice) - pe) < 1e-12);
      }
    }
  }
}

TEST_CASE("conditional error on an empty port is rejected") {
  // phi = 0 sends everything to port 1; port 2 carries no amplitude.
  const PhotonState out =
      fpb_through_corrector(AliceChoice::H, FpbConfig(0.2), ChannelParams{0.3, 0.4, 0.0});
  CHECK_THROWS_AS(conditional_error_probability(out, ports::kOut2, AliceChoice::H), RangeError);
}

TEST_CASE("probe measurement statistics match the success formula") {
  const double pe = 0.25;
  const FpbConfig cfg(pe);
  const ChannelParams p{1.2, 0.7, 0.9};
  const int n = 4000;
  std::mt19937_64 rng(2718);
  int correct = 0;
  int counted = 0;
  for (int t = 0; t < n; ++t) {
    const auto choice = static_cast<AliceChoice>(rng() % 4);
    const PhotonState out = fpb_through_corrector(choice, cfg, p);
    // Condition on arrival at port 1 like the receiver would.
    const auto [mass, kept] = postselect(out, [](const ModeLabel& m) {
      return m.port == ports::kOut1;
    });
    if (!kept) {
      continue;
    }
    const EveMeasurement meas = measure_eve(*kept, rng);
    // Outcome 0 points to the t_plus group {V, +}; outcome 1 to {H, -}.
    const int guess_bit = [&] {
      if (basis_of(choice) == Basis::Rectilinear) {
        return meas.outcome == 0 ? 1 : 0;
      }
      return meas.outcome == 0 ? 0 : 1;
    }();
    counted += 1;
    if (guess_bit == bit_of(choice)) {
      correct += 1;
    }
  }
  const double expected = fpb_eve_success_probability(pe);
  const double freq = static_cast<double>(correct) / counted;
  CHECK(std::abs(freq - expected) < oracles::binom_3sigma(expected, counted));
}

TEST_CASE("probe measurement requires a probe and collapses to unit norm") {
  std::mt19937_64 rng(5);
  const PhotonState bare = PhotonState::qubit(1.0, 0.0, ports::kIn);
  CHECK_THROWS_AS(measure_eve(bare, rng), StructureError);

  const PhotonState joint = fpb_entangle_choice(AliceChoice::Plus, FpbConfig(0.25), ports::kIn);
  const EveMeasurement meas = measure_eve(joint, rng);
  CHECK((meas.outcome == 0 || meas.outcome == 1));
  CHECK(meas.collapsed.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero disturbance leaves the signal uncorrelated with the probe") {
  // At pe = 0 Eve learns nothing: her outcome distribution is 50/50
  // independent of the signal, and the signal is undisturbed.
  const FpbConfig cfg(0.0);
  for (const AliceChoice choice : kAllChoices) {
    const PhotonState joint = fpb_entangle_choice(choice, cfg, ports::kIn);
    CHECK(std::abs(flip_mass(joint, choice)) < 1e-12);
  }
  CHECK(fpb_eve_success_probability(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}
