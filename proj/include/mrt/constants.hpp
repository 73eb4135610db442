#pragma once

#include <numbers>

// Exact SI values (2019 redefinition). Everything downstream is derived from
// these so that outputs are reproducible bit-for-bit on a given build.
namespace mrt::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / (2.0 * pi);           // J s
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb

}  // namespace mrt::constants
