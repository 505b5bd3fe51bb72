#pragma once

#include <cstdint>
#include <functional>

#include "covert/channel.hpp"

namespace covert {

enum class EstimateMethod { AnalyticQuadrature, MonteCarlo };

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // binomial standard error; 0 for quadrature
  EstimateMethod method = EstimateMethod::MonteCarlo;
  std::size_t n_trials = 0;
  double quad_tol = 0.0;
  double error_estimate = 0.0;  // quadrature error estimate incl. truncated mass
  bool tolerance_reached = true;
};

struct BoundsStatistics {
  std::size_t n_elements = 0;
  std::size_t n_trials = 0;
  double mean_min = 0.0, std_min = 0.0;
  double mean_max = 0.0, std_max = 0.0;
  double mean_direct = 0.0, std_direct = 0.0;
};

/// Replaces sample_realization in Monte-Carlo drivers (used by tests to pin
/// the channel).
using RealizationSampler = std::function<ChannelRealization(const ChannelParams&, std::uint64_t stream)>;

struct MonteCarloOptions {
  std::size_t workers = 1;
  RealizationSampler sampler;
};

/// P(|X1 - X2| <= Y <= X1 + X2) with X1, X2 double-Rayleigh and Y Rayleigh,
/// by nested adaptive quadrature. The innermost dimension is closed through
/// the double-Rayleigh CDF.
ProbabilityEstimate existence_probability_n2_analytic(double sigma_x1, double sigma_x2, double sigma_y,
                                                      double quad_tol = 1e-6);

/// Fraction of sampled realizations satisfying the polygon condition.
/// Trial t draws stream t of params.seed, so the estimate does not depend on
/// the worker count.
ProbabilityEstimate existence_probability_mc(const ChannelParams& params, std::size_t n_trials,
                                             const MonteCarloOptions& options = {});

/// Sample mean and standard deviation of min/max |sum z e^{j phi}| and |h_aw|.
BoundsStatistics bounds_statistics(const ChannelParams& params, std::size_t n_trials,
                                   const MonteCarloOptions& options = {});

}  // namespace covert
