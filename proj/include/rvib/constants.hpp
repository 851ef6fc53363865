#pragma once

#include <numbers>

// CODATA 2018 recommended values (SI).
namespace rvib::constants {

inline constexpr double elementary_charge = 1.602176634e-19;      // C (exact)
inline constexpr double vacuum_permittivity = 8.8541878128e-12;   // F/m
inline constexpr double hbar = 1.054571817e-34;                   // J s (exact)
inline constexpr double bohr_radius = 5.29177210903e-11;          // m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;     // kg

inline constexpr double coulomb_constant = 1.0 / (4.0 * std::numbers::pi * vacuum_permittivity);

}  // namespace rvib::constants
