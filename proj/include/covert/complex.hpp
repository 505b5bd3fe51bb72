#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace covert {

using ComplexScalar = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double angle) noexcept {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a value just below 0 can round back up to 2*pi.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double angle) noexcept {
  double w = kPi - wrap_two_pi(kPi - angle);
  return w;
}

/// Argument in (-pi, pi]. The zero vector has angle 0.
inline double angle_of(ComplexScalar z) noexcept {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  double a = std::atan2(z.imag(), z.real());
  return a <= -kPi ? kPi : a;
}

inline bool is_finite(ComplexScalar z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// e^{j*angle}
inline ComplexScalar unit_phasor(double angle) noexcept {
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace covert
