#ifndef POLQEC_PHOTON_STATE_HPP
#define POLQEC_PHOTON_STATE_HPP

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "polqec/mode.hpp"

namespace polqec {

/// Amplitudes with modulus below this are dropped when a state is built.
inline constexpr double kAmplitudePruneThreshold = 1e-15;

/// Default tolerance for overlap and phase-insensitive state comparisons.
inline constexpr double kStateTolerance = 1e-12;

/// A single photon in a normalized superposition of labeled optical modes.
///
/// Immutable value type: every operation returns a new state. The term map is
/// dense over the populated modes only; all setups in this library stay below
/// a few dozen modes, so no sparse machinery is used and every amplitude stays
/// directly auditable.
///
/// Invariants enforced at construction:
///  - 0 < sum |amplitude|^2 <= 1 + 1e-12,
///  - no retained amplitude has modulus below kAmplitudePruneThreshold,
///  - either every term carries a probe (eve) index or none does.
class PhotonState {
 public:
  using TermMap = std::map<ModeLabel, Complex>;

  /// Builds a state from explicit terms. Prunes negligible amplitudes, then
  /// checks the norm and tensor-structure invariants.
  explicit PhotonState(TermMap terms);

  /// Fresh polarization qubit alpha|H> + beta|V> at delay 0 on `port`.
  /// Requires |alpha|^2 + |beta|^2 = 1 within 1e-9.
  static PhotonState qubit(Complex alpha, Complex beta, const std::string& port);

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Amplitude of one mode; 0 if the mode is not populated.
  Complex amplitude(const ModeLabel& label) const;

  double norm2() const;
  double norm() const;

  /// True when the terms carry a probe index.
  bool entangled_with_probe() const { return has_eve_; }

  /// New state with every label rewritten by `fn`. Amplitudes landing on the
  /// same label add coherently. The rewrite must not change whether a probe
  /// index is present.
  PhotonState relabeled(const std::function<ModeLabel(const ModeLabel&)>& fn) const;

  /// New state with every delay shifted by `offset` (must keep delays >= 0).
  PhotonState shifted_delays(int offset) const;

 private:
  TermMap terms_;
  bool has_eve_ = false;
};

/// Inner product <a|b> over matching mode labels; modes populated on one side
/// only contribute zero. Throws StructureError when one state carries a probe
/// index and the other does not.
Complex overlap(const PhotonState& a, const PhotonState& b);

/// |<a|b>|^2 / (<a|a><b|b>) - insensitive to global phase.
double fidelity(const PhotonState& a, const PhotonState& b);

/// True iff |<a|b>|^2 >= (1 - tol) * <a|a> * <b|b>.
bool equal_up_to_global_phase(const PhotonState& a, const PhotonState& b,
                              double tol = kStateTolerance);

using ModePredicate = std::function<bool(const ModeLabel&)>;

/// Probability mass on the modes selected by `keep`, plus the renormalized
/// restriction. Zero mass is a valid outcome and returns no state.
std::pair<double, std::optional<PhotonState>> postselect(const PhotonState& s,
                                                         const ModePredicate& keep);

struct BornOutcome {
  std::size_t cell = 0;
  PhotonState collapsed;
};

/// Projective measurement over a partition of the populated modes. Each cell
/// is a predicate; every populated mode must match exactly one cell, otherwise
/// PartitionError. The cell is drawn with probability equal to its
/// amplitude-squared mass and the collapsed state is the renormalized
/// restriction.
BornOutcome born_sample(const PhotonState& s, const std::vector<ModePredicate>& cells,
                        std::mt19937_64& rng);

/// Product state with a fresh probe qubit eve_plus|+> + eve_minus|->.
/// Requires a probe-free input and |eve_plus|^2 + |eve_minus|^2 = 1 within 1e-9.
PhotonState tensor_with_eve(const PhotonState& s, Complex eve_plus, Complex eve_minus);

}  // namespace polqec

#endif  // POLQEC_PHOTON_STATE_HPP
