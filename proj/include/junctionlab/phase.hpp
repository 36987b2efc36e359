#pragma once

#include <numbers>

namespace junctionlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps a phase into [0, 2π) on a grid of 2π/2^44 rad. Multiples of π/2^k
/// land exactly on their double values, and φ and φ + 2π produce bitwise
/// identical results.
double normalize_phase(double phi);

}  // namespace junctionlab
