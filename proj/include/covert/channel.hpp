#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "covert/complex.hpp"

namespace covert {

enum class Receiver { Willie, Bob };

/// Scenario parameters for the single-antenna IRS link.
///
/// Every complex coefficient with scale sigma has independent real and
/// imaginary parts of standard deviation sigma, so its magnitude is
/// Rayleigh(sigma) and E|h|^2 = 2 sigma^2.
struct ChannelParams {
  std::size_t n_elements = 2;
  double sigma_as = 1.0;  // Alice -> IRS
  double sigma_sw = 1.0;  // IRS -> Willie
  double sigma_sb = 1.0;  // IRS -> Bob
  double sigma_aw = 1.0;  // Alice -> Willie (direct)
  double sigma_ab = 1.0;  // Alice -> Bob (direct)
  double noise_var_w = 1.0;
  double noise_var_b = 1.0;
  double tx_power = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a non-positive scale or N == 0.
  void validate() const;
};

struct ChannelRealization {
  std::vector<ComplexScalar> h_as;
  std::vector<ComplexScalar> g_sw;
  std::vector<ComplexScalar> g_sb;
  ComplexScalar h_aw{};
  ComplexScalar h_ab{};

  std::size_t n_elements() const noexcept { return h_as.size(); }

  /// Throws std::invalid_argument on length mismatch or non-finite entries.
  void validate() const;

  bool operator==(const ChannelRealization&) const = default;
};

/// One cascaded IRS coefficient z = g * h in polar form.
struct CascadeTerm {
  ComplexScalar z{};
  double r = 0.0;
  double phase_z = 0.0;

  static CascadeTerm from(ComplexScalar z) noexcept { return {z, std::abs(z), angle_of(z)}; }
};

/// Draws every coefficient of a realization from stream `stream` of params.seed.
ChannelRealization sample_realization(const ChannelParams& params, std::uint64_t stream = 0);

/// z_i = g_i * h_as_i with g = g_sw (Willie) or g_sb (Bob).
std::vector<CascadeTerm> cascade_terms(const ChannelRealization& realization, Receiver receiver);

/// Line-oriented text form, one "re:im" token per complex value, 17 significant digits.
std::string to_text(const ChannelRealization& realization);
/// Inverse of to_text. Throws std::invalid_argument on malformed input.
ChannelRealization realization_from_text(std::string_view text);

// Densities --------------------------------------------------------------

double rayleigh_pdf(double x, double sigma);
double rayleigh_cdf(double x, double sigma);
/// x with P(X > x) = tail.
double rayleigh_upper_quantile(double tail, double sigma);

/// Density of the product of independent Rayleigh(sigma1) and Rayleigh(sigma2)
/// variables, via the closed form x / (s1 s2)^2 * K0(x / (s1 s2)).
double double_rayleigh_pdf(double x, double sigma1, double sigma2);
/// Same density evaluated by quadrature of the product-distribution integral.
double double_rayleigh_pdf_quadrature(double x, double sigma1, double sigma2);

/// P(X > x) = a K1(a) with a = x / (s1 s2).
double double_rayleigh_survival(double x, double sigma1, double sigma2);
double double_rayleigh_cdf(double x, double sigma1, double sigma2);
/// CDF by quadrature of the conditional Rayleigh CDF against the first factor.
double double_rayleigh_cdf_quadrature(double x, double sigma1, double sigma2);
/// x with P(X > x) = tail.
double double_rayleigh_upper_quantile(double tail, double sigma1, double sigma2);

}  // namespace covert
