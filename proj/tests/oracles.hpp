// Independent reference computations used to pin expected values in the
// tests. Everything here is closed-form or brute-force and deliberately
// avoids the library's own optical-component pipeline.

#ifndef POLQEC_TESTS_ORACLES_HPP
#define POLQEC_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "polqec/channel.hpp"
#include "polqec/mode.hpp"
#include "polqec/photon_state.hpp"
#include "polqec/rng.hpp"

namespace oracles {

using polqec::Complex;

// ---------------------------------------------------------------------------
// Corrector outputs in closed form.
//
// For input alpha|H> + beta|V> and channel phases (lambda, xi, phi), both
// single-photon correctors must emit, at delay 1,
//   port 1: e^{ i lambda} cos(phi) (alpha|H> + beta|V>)
//   port 2: e^{ i xi}     sin(phi) (alpha|H> + beta|V>)
// computed here directly from the transformation the channel applies to the
// two time bins, without any beam-splitter bookkeeping.

inline polqec::PhotonState corrector_output(Complex alpha, Complex beta,
                                            const polqec::ChannelParams& p) {
  const Complex g1 = std::polar(std::cos(p.phi_mix), p.lambda_phase);
  const Complex g2 = std::polar(std::sin(p.phi_mix), p.xi_phase);
  polqec::PhotonState::TermMap terms;
  terms[{polqec::Pol::H, 1, "1", std::nullopt}] = g1 * alpha;
  terms[{polqec::Pol::V, 1, "1", std::nullopt}] = g1 * beta;
  terms[{polqec::Pol::H, 1, "2", std::nullopt}] = g2 * alpha;
  terms[{polqec::Pol::V, 1, "2", std::nullopt}] = g2 * beta;
  return polqec::PhotonState(std::move(terms));
}

// Useful-slot amplitudes of the passive corrector: the prepared pulse
// (alpha_h, alpha_v) reaches delay 1 as
//   port 1: e^{ i xi}     sin(phi) / 2 * (alpha_h, alpha_v)
//   port 2: e^{ i lambda} cos(phi) / 2 * (alpha_h, alpha_v)
struct PassiveSlots {
  Complex p1_h, p1_v;
  Complex p2_h, p2_v;
};

inline PassiveSlots passive_useful_slots(Complex alpha_h, Complex alpha_v,
                                         const polqec::ChannelParams& p) {
  const Complex g1 = std::polar(0.5 * std::sin(p.phi_mix), p.xi_phase);
  const Complex g2 = std::polar(0.5 * std::cos(p.phi_mix), p.lambda_phase);
  return {g1 * alpha_h, g1 * alpha_v, g2 * alpha_h, g2 * alpha_v};
}

// ---------------------------------------------------------------------------
// Coherent-state overlap by Fock-space brute force.
//
// |<alpha|beta>| for two single-mode coherent states, evaluated by summing
// the Fock expansion up to a cutoff where the tail is negligible for the
// amplitudes used in the tests (|alpha| <= 4 -> n up to ~60 suffices at
// double precision; we go to 120 for margin).

inline double coherent_overlap_fock(Complex a, Complex b) {
  constexpr int kCutoff = 120;
  // <a|b> = exp(-|a|^2/2 - |b|^2/2) * sum_n (conj(a) b)^n / n!
  Complex sum = 0.0;
  Complex term = 1.0;
  const Complex z = std::conj(a) * b;
  for (int n = 0; n < kCutoff; ++n) {
    sum += term;
    term *= z / static_cast<double>(n + 1);
  }
  const double damp = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b));
  return std::abs(sum) * damp;
}

// Two-polarization-mode product state |a_h, a_v>.
inline double two_mode_overlap_fock(Complex ah1, Complex av1, Complex ah2, Complex av2) {
  return coherent_overlap_fock(ah1, ah2) * coherent_overlap_fock(av1, av2);
}

// ---------------------------------------------------------------------------
// Golden-section maximizer for smooth unimodal 1-d functions.

template <typename F>
double golden_max(F f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > tol) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Statistics helpers and random generators for property tests.

// Half-width of the 3-sigma band for a binomial proportion estimate.
inline double binom_3sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

struct RandomQubit {
  Complex alpha, beta;
};

inline RandomQubit random_qubit(std::mt19937_64& rng) {
  const double bloch = polqec::uniform_unit(rng) * std::numbers::pi;
  const double phase = polqec::uniform_unit(rng) * 2.0 * std::numbers::pi;
  return {std::cos(0.5 * bloch), std::polar(std::sin(0.5 * bloch), phase)};
}

inline polqec::ChannelParams random_channel(std::mt19937_64& rng) {
  return polqec::ChannelParams{polqec::uniform_unit(rng) * 2.0 * std::numbers::pi,
                               polqec::uniform_unit(rng) * 2.0 * std::numbers::pi,
                               polqec::uniform_unit(rng) * 0.5 * std::numbers::pi};
}

}  // namespace oracles

#endif  // POLQEC_TESTS_ORACLES_HPP
