#ifndef POLQEC_VERSION_HPP
#define POLQEC_VERSION_HPP

namespace polqec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polqec

#endif  // POLQEC_VERSION_HPP
