#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covert/channel.hpp"

namespace covert {

namespace {

void check_args(double x, double sigma, const char* fn) {
  if (!(sigma > 0.0)) throw std::domain_error(std::string(fn) + ": sigma must be positive");
  if (!(x >= 0.0)) throw std::domain_error(std::string(fn) + ": x must be nonnegative");
}

void check_args(double x, double sigma1, double sigma2, const char* fn) {
  check_args(x, sigma1, fn);
  if (!(sigma2 > 0.0)) throw std::domain_error(std::string(fn) + ": sigma must be positive");
}

// Half-width in log-space beyond which exp(-a cosh 2v) is below double range.
double log_window(double a) {
  const double ratio = std::max(800.0 / a, 1.0);
  return 0.5 * std::acosh(ratio) + 1.0;
}

template <class F>
double integrate(F f, double lo, double hi, double tol) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 25, tol, &err);
}

}  // namespace

double rayleigh_pdf(double x, double sigma) {
  check_args(x, sigma, "rayleigh_pdf");
  const double s2 = sigma * sigma;
  return x / s2 * std::exp(-x * x / (2.0 * s2));
}

double rayleigh_cdf(double x, double sigma) {
  check_args(x, sigma, "rayleigh_cdf");
  return -std::expm1(-x * x / (2.0 * sigma * sigma));
}

double rayleigh_upper_quantile(double tail, double sigma) {
  if (!(tail > 0.0 && tail <= 1.0)) throw std::domain_error("rayleigh_upper_quantile: tail must be in (0, 1]");
  return sigma * std::sqrt(-2.0 * std::log(tail));
}

double double_rayleigh_pdf(double x, double sigma1, double sigma2) {
  check_args(x, sigma1, sigma2, "double_rayleigh_pdf");
  if (x == 0.0) return 0.0;
  const double s = sigma1 * sigma2;
  const double a = x / s;
  return a / s * std::cyl_bessel_k(0.0, a);
}

double double_rayleigh_pdf_quadrature(double x, double sigma1, double sigma2) {
  check_args(x, sigma1, sigma2, "double_rayleigh_pdf_quadrature");
  if (x == 0.0) return 0.0;
  // f(x) = int_0^inf f_R1(t) f_R2(x/t) / t dt with t = t0 e^v, t0 at the integrand peak.
  const double t0 = std::sqrt(x * sigma1 / sigma2);
  const double a = x / (sigma1 * sigma2);
  auto integrand = [&](double v) {
    const double t = t0 * std::exp(v);
    return rayleigh_pdf(t, sigma1) * rayleigh_pdf(x / t, sigma2);
  };
  const double w = log_window(a);
  return integrate(integrand, -w, w, 1e-14);
}

double double_rayleigh_survival(double x, double sigma1, double sigma2) {
  check_args(x, sigma1, sigma2, "double_rayleigh_survival");
  if (x == 0.0) return 1.0;
  const double a = x / (sigma1 * sigma2);
  if (a > 745.0) return 0.0;
  return a * std::cyl_bessel_k(1.0, a);
}

double double_rayleigh_cdf(double x, double sigma1, double sigma2) {
  check_args(x, sigma1, sigma2, "double_rayleigh_cdf");
  return 1.0 - double_rayleigh_survival(x, sigma1, sigma2);
}

double double_rayleigh_cdf_quadrature(double x, double sigma1, double sigma2) {
  check_args(x, sigma1, sigma2, "double_rayleigh_cdf_quadrature");
  if (x == 0.0) return 0.0;
  // F(x) = int_0^inf f_R1(t) P(R2 <= x/t) dt, again in log-space around t0.
  const double t0 = std::sqrt(x * sigma1 / sigma2);
  const double a = x / (sigma1 * sigma2);
  auto integrand = [&](double v) {
    const double t = t0 * std::exp(v);
    return rayleigh_pdf(t, sigma1) * rayleigh_cdf(x / t, sigma2) * t;
  };
  // Left tail decays like e^{2v}; right tail doubly exponentially.
  return integrate(integrand, -40.0, log_window(a), 1e-14);
}

double double_rayleigh_upper_quantile(double tail, double sigma1, double sigma2) {
  if (!(tail > 0.0 && tail <= 1.0)) throw std::domain_error("double_rayleigh_upper_quantile: tail must be in (0, 1]");
  if (tail == 1.0) return 0.0;
  // a K1(a) decreases from 1 at a = 0.
  double lo = 0.0;
  double hi = 1.0;
  while (hi * std::cyl_bessel_k(1.0, hi) > tail && hi < 745.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::cyl_bessel_k(1.0, mid) > tail)
      lo = mid;
    else
      hi = mid;
  }
  return hi * sigma1 * sigma2;
}

}  // namespace covert
