#include "polqec/polarization_unitary.hpp"

#include <algorithm>
#include <cmath>

namespace polqec {

PolarizationUnitary PolarizationUnitary::rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {{Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0}}};
}

PolarizationUnitary PolarizationUnitary::adjoint() const {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

double PolarizationUnitary::unitarity_defect() const {
  // Entries of U^dagger U minus the identity, checked in max norm.
  const Complex g00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2] - 1.0;
  const Complex g01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
  const Complex g10 = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
  const Complex g11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3] - 1.0;
  return std::max({std::abs(g00), std::abs(g01), std::abs(g10), std::abs(g11)});
}

}  // namespace polqec
