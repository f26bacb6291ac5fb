#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>

namespace thermo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi).
double wrap_angle(double a);

// Shortest signed difference a - b on the circle, in (-pi, pi].
double angle_diff(double a, double b);

// Max-norm distance between two (x, y, theta) states, all coordinates
// compared modulo 2*pi.
double torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b);

// Pairwise (cascade) summation; order is a pure function of xs.size().
double pairwise_sum(std::span<const double> xs);

// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

// Map a 64-bit word to a double in [0, 1). Platform-stable, unlike
// std::uniform_real_distribution.
inline double to_unit_double(std::uint64_t r) { return static_cast<double>(r >> 11) * 0x1.0p-53; }

}  // namespace thermo
