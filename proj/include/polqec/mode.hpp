#ifndef POLQEC_MODE_HPP
#define POLQEC_MODE_HPP

#include <compare>
#include <complex>
#include <optional>
#include <string>

namespace polqec {

using Complex = std::complex<double>;

/// Correctly rounded 1/sqrt(2). A fixed literal rather than a computed value:
/// diagonal-basis coefficients must be the same double everywhere so that
/// symmetric contributions cancel bitwise (e.g. measuring |+> in its own
/// basis leaves an exact zero on the other detector).
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Linear polarization of an optical mode.
enum class Pol { H, V };

inline Pol flipped(Pol p) { return p == Pol::H ? Pol::V : Pol::H; }

/// Basis component of the eavesdropper's probe qubit, expressed in the
/// diagonal basis of her measurement frame.
enum class EveBit { Plus, Minus };

/// One discrete optical mode: polarization, arrival time-bin, spatial port,
/// and (when a probe photon is entangled with the signal) the probe index.
///
/// The delay counts arrival time in units of the interferometer imbalance.
/// Two paths with equal total delay land in the same mode; path history is
/// deliberately not part of the label.
struct ModeLabel {
  Pol pol = Pol::H;
  int delay = 0;
  std::string port;
  std::optional<EveBit> eve;

  auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(Pol p);
std::string to_string(EveBit e);
std::string to_string(const ModeLabel& m);

}  // namespace polqec

#endif  // POLQEC_MODE_HPP
