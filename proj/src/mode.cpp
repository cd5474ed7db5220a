#include "polqec/mode.hpp"

namespace polqec {

std::string to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

std::string to_string(EveBit e) { return e == EveBit::Plus ? "+" : "-"; }

std::string to_string(const ModeLabel& m) {
  std::string out = to_string(m.pol) + " t" + std::to_string(m.delay) + " @" + m.port;
  if (m.eve) {
    out += " probe" + to_string(*m.eve);
  }
  return out;
}

}  // namespace polqec
