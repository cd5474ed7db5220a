#ifndef POLQEC_POLARIZATION_UNITARY_HPP
#define POLQEC_POLARIZATION_UNITARY_HPP

#include <array>
#include <utility>

#include "polqec/mode.hpp"

namespace polqec {

/// 2x2 complex matrix acting on (H, V) amplitude pairs.
///
/// Row-major storage: {m00, m01, m10, m11}. Construction does not force
/// unitarity; callers that require it check with is_unitary().
struct PolarizationUnitary {
  std::array<Complex, 4> m{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}};

  static PolarizationUnitary identity() { return {}; }

  /// Rotation by theta: H' = cos(theta) H - sin(theta) V, V' = sin(theta) H + cos(theta) V.
  static PolarizationUnitary rotation(double theta);

  /// Signless H<->V exchange.
  static PolarizationUnitary swap_hv() {
    return {{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}}};
  }

  std::pair<Complex, Complex> apply(Complex h, Complex v) const {
    return {m[0] * h + m[1] * v, m[2] * h + m[3] * v};
  }

  PolarizationUnitary adjoint() const;

  /// Max-norm of (U^dagger U - I).
  double unitarity_defect() const;

  bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }
};

}  // namespace polqec

#endif  // POLQEC_POLARIZATION_UNITARY_HPP
