#pragma once

#include <numbers>

namespace cavimag::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double mu0 = 4.0 * pi * 1e-7;        // T·m/A
inline constexpr double hbar = 1.05457182e-34;        // J·s
inline constexpr double gamma_ll = 1.7595e11;         // rad/(s·T)

}  // namespace cavimag::constants
