#include "polqec/photon_state.hpp"

#include <cmath>
#include <string>

#include "polqec/errors.hpp"
#include "polqec/rng.hpp"

namespace polqec {

namespace {

double map_norm2(const PhotonState::TermMap& terms) {
  double n2 = 0.0;
  for (const auto& [label, amp] : terms) {
    n2 += std::norm(amp);
  }
  return n2;
}

}  // namespace

PhotonState::PhotonState(TermMap terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) < kAmplitudePruneThreshold) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
  if (terms.empty()) {
    throw NormalizationError("photon state has no support above the pruning threshold");
  }

  const double n2 = map_norm2(terms);
  if (n2 > 1.0 + kStateTolerance) {
    throw NormalizationError("photon state norm^2 " + std::to_string(n2) + " exceeds 1");
  }

  const bool first_has_eve = terms.begin()->first.eve.has_value();
  for (const auto& [label, amp] : terms) {
    if (label.eve.has_value() != first_has_eve) {
      throw StructureError("probe index present on some modes but not on all");
    }
  }

  terms_ = std::move(terms);
  has_eve_ = first_has_eve;
}

PhotonState PhotonState::qubit(Complex alpha, Complex beta, const std::string& port) {
  const double n2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw NormalizationError("qubit amplitudes have norm^2 " + std::to_string(n2));
  }
  TermMap terms;
  terms[{Pol::H, 0, port, std::nullopt}] = alpha;
  terms[{Pol::V, 0, port, std::nullopt}] = beta;
  return PhotonState(std::move(terms));
}

Complex PhotonState::amplitude(const ModeLabel& label) const {
  const auto it = terms_.find(label);
  return it == terms_.end() ? Complex{0, 0} : it->second;
}

double PhotonState::norm2() const { return map_norm2(terms_); }

double PhotonState::norm() const { return std::sqrt(norm2()); }

PhotonState PhotonState::relabeled(const std::function<ModeLabel(const ModeLabel&)>& fn) const {
  TermMap out;
  for (const auto& [label, amp] : terms_) {
    const ModeLabel target = fn(label);
    if (target.eve.has_value() != has_eve_) {
      throw StructureError("mode rewrite must not add or remove the probe index");
    }
    out[target] += amp;
  }
  return PhotonState(std::move(out));
}

PhotonState PhotonState::shifted_delays(int offset) const {
  for (const auto& [label, amp] : terms_) {
    if (label.delay + offset < 0) {
      throw RangeError("delay shift would produce a negative arrival time");
    }
  }
  return relabeled([offset](const ModeLabel& m) {
    ModeLabel out = m;
    out.delay += offset;
    return out;
  });
}

Complex overlap(const PhotonState& a, const PhotonState& b) {
  if (a.entangled_with_probe() != b.entangled_with_probe()) {
    throw StructureError("overlap between a probe-entangled and a probe-free state");
  }
  Complex acc{0, 0};
  for (const auto& [label, amp] : a.terms()) {
    acc += std::conj(amp) * b.amplitude(label);
  }
  return acc;
}

double fidelity(const PhotonState& a, const PhotonState& b) {
  return std::norm(overlap(a, b)) / (a.norm2() * b.norm2());
}

bool equal_up_to_global_phase(const PhotonState& a, const PhotonState& b, double tol) {
  return fidelity(a, b) >= 1.0 - tol;
}

std::pair<double, std::optional<PhotonState>> postselect(const PhotonState& s,
                                                         const ModePredicate& keep) {
  PhotonState::TermMap kept;
  double mass = 0.0;
  for (const auto& [label, amp] : s.terms()) {
    if (keep(label)) {
      kept[label] = amp;
      mass += std::norm(amp);
    }
  }
  if (kept.empty()) {
    return {0.0, std::nullopt};
  }
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& [label, amp] : kept) {
    amp *= scale;
  }
  return {mass, PhotonState(std::move(kept))};
}

BornOutcome born_sample(const PhotonState& s, const std::vector<ModePredicate>& cells,
                        std::mt19937_64& rng) {
  if (cells.empty()) {
    throw PartitionError("measurement needs at least one cell");
  }
  std::vector<double> masses(cells.size(), 0.0);
  for (const auto& [label, amp] : s.terms()) {
    std::size_t hits = 0;
    std::size_t cell = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i](label)) {
        ++hits;
        cell = i;
      }
    }
    if (hits != 1) {
      throw PartitionError("mode " + to_string(label) + " matches " + std::to_string(hits) +
                           " measurement cells; a partition must match each mode exactly once");
    }
    masses[cell] += std::norm(amp);
  }

  // The draw is scaled by the total mass so sub-normalized states are
  // handled too.
  const double u = uniform_unit(rng) * s.norm2();
  double cumulative = 0.0;
  std::size_t chosen = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cumulative += masses[i];
    if (u < cumulative && masses[i] > 0.0) {
      chosen = i;
      break;
    }
  }
  if (chosen == cells.size()) {
    // Rounding pushed u past the last populated cell; take that cell.
    for (std::size_t i = cells.size(); i-- > 0;) {
      if (masses[i] > 0.0) {
        chosen = i;
        break;
      }
    }
  }

  auto [mass, collapsed] = postselect(s, cells[chosen]);
  (void)mass;
  return {chosen, std::move(*collapsed)};
}

PhotonState tensor_with_eve(const PhotonState& s, Complex eve_plus, Complex eve_minus) {
  if (s.entangled_with_probe()) {
    throw StructureError("state already carries a probe index");
  }
  const double n2 = std::norm(eve_plus) + std::norm(eve_minus);
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw NormalizationError("probe amplitudes have norm^2 " + std::to_string(n2));
  }
  PhotonState::TermMap out;
  for (const auto& [label, amp] : s.terms()) {
    ModeLabel plus = label;
    plus.eve = EveBit::Plus;
    ModeLabel minus = label;
    minus.eve = EveBit::Minus;
    out[plus] = amp * eve_plus;
    out[minus] = amp * eve_minus;
  }
  return PhotonState(std::move(out));
}

}  // namespace polqec
