#include "covert/probability.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <tuple>
#include <stdexcept>
#include <thread>
#include <vector>

#include "covert/covertness.hpp"

namespace covert {

namespace {

constexpr double kTailMass = 1e-10;
constexpr unsigned kMaxDepth = 20;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
using Legendre = boost::math::quadrature::gauss<double, 15>;

// Double-Rayleigh mass on [a, b] with b <= 3a. Narrow or near-origin windows
// integrate the density directly, since the survival difference cancels there.
double window_mass(double a, double b, double s) {
  if (!(b > a)) return 0.0;
  if (b - a <= 0.25 * b || b <= 2.0 * s) {
    return Legendre::integrate([s](double x) { return double_rayleigh_pdf(x, s, 1.0); }, a, b);
  }
  return std::max(double_rayleigh_survival(a, s, 1.0) - double_rayleigh_survival(b, s, 1.0), 0.0);
}

// Runs body(begin, end) over contiguous chunks of [0, n) on `workers` threads.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t workers, Body body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ChannelRealization draw(const ChannelParams& params, std::uint64_t trial, const MonteCarloOptions& options) {
  return options.sampler ? options.sampler(params, trial) : sample_realization(params, trial);
}

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

// P(X2 <= X1, X1 - X2 <= Y <= X1 + X2) where X1 has scale s1, X2 scale s2.
// With x2 and y fixed, x1 ranges over [max(x2, y - x2), y + x2]; that inner
// integral is the mass of X1 on [max(x2, y - x2), y + x2].
Quadrature ordered_half(double s1, double s2, double sy, double tol) {
  const double x1_max = double_rayleigh_upper_quantile(kTailMass, s1, 1.0);
  const double x2_max = double_rayleigh_upper_quantile(kTailMass, s2, 1.0);
  // The event needs y <= x1 + x2.
  const double y_max = std::min(rayleigh_upper_quantile(kTailMass, sy), x1_max + x2_max);
  double worst_inner_error = 0.0;

  auto inner = [&](double y) {
    auto integrand = [&](double x2) {
      const double mass = window_mass(std::max(x2, y - x2), y + x2, s1);
      return double_rayleigh_pdf(x2, s2, 1.0) * mass;
    };
    const double split = std::min(0.5 * y, x2_max);
    double total = 0.0;
    double err = 0.0;
    if (split > 0.0) {
      total += Kronrod::integrate(integrand, 0.0, split, kMaxDepth, tol, &err);
      worst_inner_error = std::max(worst_inner_error, err);
    }
    if (split < x2_max) {
      total += Kronrod::integrate(integrand, split, x2_max, kMaxDepth, tol, &err);
      worst_inner_error = std::max(worst_inner_error, err);
    }
    return rayleigh_pdf(y, sy) * total;
  };

  Quadrature q;
  q.value = Kronrod::integrate(inner, 0.0, y_max, kMaxDepth, tol, &q.error);
  q.error += worst_inner_error + 3.0 * kTailMass;
  return q;
}

}  // namespace

ProbabilityEstimate existence_probability_n2_analytic(double sigma_x1, double sigma_x2, double sigma_y,
                                                      double quad_tol) {
  if (!(sigma_x1 > 0.0 && sigma_x2 > 0.0 && sigma_y > 0.0)) {
    throw std::invalid_argument("existence_probability_n2_analytic: scales must be positive");
  }
  if (!(quad_tol > 0.0)) throw std::invalid_argument("existence_probability_n2_analytic: quad_tol must be positive");

  // Inner integrals run tighter than the outer one so their error does not dominate.
  const double inner_tol = 0.1 * quad_tol;
  Quadrature total = ordered_half(sigma_x1, sigma_x2, sigma_y, inner_tol);
  if (sigma_x1 == sigma_x2) {
    // The two orderings X1 >= X2 and X2 >= X1 are exchangeable.
    total.value *= 2.0;
    total.error *= 2.0;
  } else {
    const Quadrature other = ordered_half(sigma_x2, sigma_x1, sigma_y, inner_tol);
    total.value += other.value;
    total.error += other.error;
  }

  ProbabilityEstimate est;
  est.method = EstimateMethod::AnalyticQuadrature;
  est.value = std::clamp(total.value, 0.0, 1.0);
  est.quad_tol = quad_tol;
  est.error_estimate = total.error;
  est.tolerance_reached = total.error <= quad_tol;
  return est;
}

ProbabilityEstimate existence_probability_mc(const ChannelParams& params, std::size_t n_trials,
                                             const MonteCarloOptions& options) {
  params.validate();
  if (n_trials == 0) throw std::invalid_argument("existence_probability_mc: n_trials must be >= 1");
  std::vector<unsigned char> feasible(n_trials, 0);
  parallel_chunks(n_trials, options.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      const ChannelRealization real = draw(params, t, options);
      feasible[t] = feasibility_bounds(cascade_terms(real, Receiver::Willie), real.h_aw).feasible ? 1 : 0;
    }
  });
  std::size_t count = 0;
  for (auto f : feasible) count += f;

  ProbabilityEstimate est;
  est.method = EstimateMethod::MonteCarlo;
  est.n_trials = n_trials;
  est.value = static_cast<double>(count) / static_cast<double>(n_trials);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_trials));
  return est;
}

BoundsStatistics bounds_statistics(const ChannelParams& params, std::size_t n_trials,
                                   const MonteCarloOptions& options) {
  params.validate();
  if (n_trials < 2) throw std::invalid_argument("bounds_statistics: n_trials must be >= 2");
  std::vector<FeasibilityBounds> per_trial(n_trials);
  parallel_chunks(n_trials, options.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      const ChannelRealization real = draw(params, t, options);
      per_trial[t] = feasibility_bounds(cascade_terms(real, Receiver::Willie), real.h_aw);
    }
  });

  // Summation in trial order keeps the result independent of the worker count.
  auto moments = [&](auto field) {
    double mean = 0.0;
    for (const auto& b : per_trial) mean += field(b);
    mean /= static_cast<double>(n_trials);
    double ss = 0.0;
    for (const auto& b : per_trial) ss += (field(b) - mean) * (field(b) - mean);
    return std::pair{mean, std::sqrt(ss / static_cast<double>(n_trials - 1))};
  };

  BoundsStatistics out;
  out.n_elements = params.n_elements;
  out.n_trials = n_trials;
  std::tie(out.mean_min, out.std_min) = moments([](const FeasibilityBounds& b) { return b.min_mag; });
  std::tie(out.mean_max, out.std_max) = moments([](const FeasibilityBounds& b) { return b.max_mag; });
  std::tie(out.mean_direct, out.std_direct) = moments([](const FeasibilityBounds& b) { return b.direct_mag; });
  return out;
}

}  // namespace covert
