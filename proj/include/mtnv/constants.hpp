#pragma once

#include <numbers>

namespace mtnv::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J / K
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J / T
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bohr magneton in the NV frequency convention: 14 MHz per mT (cyclic).
inline constexpr double kBohrMagnetonHzPerMilliTesla = 14.0e6;
// NV Lande factor.
inline constexpr double kNvLandeFactor = 2.0;

// Nanowire Zeeman conversion g*mu_B = 1.5 meV/T.
inline constexpr double kWireZeemanMeVPerTesla = 1.5;

// hbar^2 / (2 m_e) in meV nm^2.
inline constexpr double kHbarSqOver2MeMeVNm2 =
    kHbar * kHbar / (2.0 * kElectronMass) / (kElementaryCharge * 1e-3) * 1e18;

inline constexpr double kMeVToJoule = kElementaryCharge * 1e-3;

}  // namespace mtnv::constants
