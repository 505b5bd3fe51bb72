#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

struct Cplx {
  double re = 0.0;
  double im = 0.0;
};

inline Cplx add(Cplx a, Cplx b) { return {a.re + b.re, a.im + b.im}; }
inline Cplx mul(Cplx a, Cplx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline double abs2(Cplx a) { return a.re * a.re + a.im * a.im; }
inline Cplx expj(double t) { return {std::cos(t), std::sin(t)}; }

/// |sum z_k e^{j phi_k} + h|^2 with hand-rolled complex arithmetic.
inline double phased_power(const std::vector<Cplx>& z, const std::vector<double>& phi, Cplx h) {
  Cplx s = h;
  for (std::size_t k = 0; k < z.size(); ++k) s = add(s, mul(z[k], expj(phi[k])));
  return abs2(s);
}

/// max_k |sin(angle(w_k) - angle(c_k))| with w_k = z_k e^{j phi_k} and c_k
/// the sum of h and every other term. Terms with r_k or |c_k| at or below
/// `floor` carry no direction and are skipped.
inline double max_alignment_sine(const std::vector<Cplx>& z, const std::vector<double>& phi, Cplx h, double floor) {
  std::vector<Cplx> w(z.size());
  Cplx total = h;
  for (std::size_t k = 0; k < z.size(); ++k) {
    w[k] = mul(z[k], expj(phi[k]));
    total = add(total, w[k]);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Cplx c{total.re - w[k].re, total.im - w[k].im};
    if (std::sqrt(abs2(w[k])) <= floor || std::sqrt(abs2(c)) <= floor) continue;
    const double d = std::atan2(w[k].im, w[k].re) - std::atan2(c.im, c.re);
    worst = std::max(worst, std::abs(std::sin(d)));
  }
  return worst;
}

struct GridExtrema {
  double min_mag = 0.0;
  double max_mag = 0.0;
};

/// Min and max of |sum r_k e^{j theta_k}| over a `points`-per-axis grid.
/// theta_1 is pinned to 0 (the magnitude is invariant under a common rotation).
inline GridExtrema grid_extrema(const std::vector<double>& r, int points) {
  const std::size_t n = r.size();
  std::vector<double> c(points), s(points);
  for (int i = 0; i < points; ++i) {
    c[i] = std::cos(2.0 * kPi * i / points);
    s[i] = std::sin(2.0 * kPi * i / points);
  }
  double lo = 1e300, hi = 0.0;
  // Odometer over axes 1..n-2; the last axis is swept in the inner loop.
  std::vector<int> idx(n, 0);
  while (true) {
    double re = r[0], im = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      re += r[k] * c[idx[k]];
      im += r[k] * s[idx[k]];
    }
    if (n == 1) {
      lo = hi = r[0];
      break;
    }
    const double rl = r[n - 1];
    for (int i = 0; i < points; ++i) {
      const double x = re + rl * c[i], y = im + rl * s[i];
      const double m2 = x * x + y * y;
      lo = std::min(lo, m2);
      hi = std::max(hi, m2);
    }
    std::size_t k = 1;
    while (k + 1 < n && ++idx[k] == points) idx[k++] = 0;
    if (k + 1 >= n) break;
  }
  return {std::sqrt(lo), std::sqrt(hi)};
}

inline std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = f(x);
    x[k] = x0 - h;
    const double fm = f(x);
    x[k] = x0;
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// 2x2 Hessian by central differences with two levels of Richardson extrapolation.
inline std::array<double, 3> hessian2(const std::function<double(double, double)>& f, double x, double y,
                                      double h0 = 1e-2) {
  auto level = [&](double h) {
    const double f0 = f(x, y);
    const double fxx = (f(x + h, y) - 2 * f0 + f(x - h, y)) / (h * h);
    const double fyy = (f(x, y + h) - 2 * f0 + f(x, y - h)) / (h * h);
    const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
    return std::array<double, 3>{fxx, fxy, fyy};
  };
  auto a = level(h0), b = level(h0 / 2), c = level(h0 / 4);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const double ab = (4 * b[i] - a[i]) / 3;
    const double bc = (4 * c[i] - b[i]) / 3;
    out[i] = (16 * bc - ab) / 15;
  }
  return out;
}

/// Eigenvalues (ascending) of the symmetric matrix [[a, b], [b, c]].
inline std::pair<double, double> sym2_eigs(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double d = std::hypot(0.5 * (a - c), b);
  return {m - d, m + d};
}

/// Composite Simpson rule on [lo, hi] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double rayleigh_density(double x, double s) { return x / (s * s) * std::exp(-x * x / (2 * s * s)); }

/// Product-distribution density of two Rayleigh variables by Simpson quadrature
/// over log t, t in [t0 e^-12, t0 e^12].
inline double product_rayleigh_density(double x, double s1, double s2) {
  const double t0 = std::sqrt(x * s1 / s2);
  auto g = [&](double v) {
    const double t = t0 * std::exp(v);
    return rayleigh_density(t, s1) * rayleigh_density(x / t, s2);
  };
  return simpson(g, -12.0, 12.0, 20000);
}

struct N2GridOptimum {
  double best_value = -1.0;  // -1 when no grid point passes the constraint
  std::size_t admitted = 0;
};

/// Constrained grid search for two elements: among grid points with
/// |w1 e^{j phi1} + w2 e^{j phi2} + h_w| <= tau, the largest
/// |b1 e^{j phi1} + b2 e^{j phi2} + h_b|^2. Rows whose first term already
/// rules the constraint out are skipped (| |u| - |w2| | > tau).
inline N2GridOptimum n2_grid_best(Cplx w1, Cplx w2, Cplx h_w, Cplx b1, Cplx b2, Cplx h_b, int points, double tau) {
  std::vector<double> c(points), s(points);
  for (int i = 0; i < points; ++i) {
    c[i] = std::cos(2.0 * kPi * i / points);
    s[i] = std::sin(2.0 * kPi * i / points);
  }
  auto rot = [&](Cplx z, int i) { return Cplx{z.re * c[i] - z.im * s[i], z.re * s[i] + z.im * c[i]}; };
  const double r2 = std::sqrt(abs2(w2));
  N2GridOptimum out;
  for (int i = 0; i < points; ++i) {
    const Cplx u = add(rot(w1, i), h_w);
    if (std::abs(std::sqrt(abs2(u)) - r2) > tau) continue;
    const Cplx ub = add(rot(b1, i), h_b);
    for (int j = 0; j < points; ++j) {
      if (abs2(add(u, rot(w2, j))) > tau * tau) continue;
      ++out.admitted;
      out.best_value = std::max(out.best_value, abs2(add(ub, rot(b2, j))));
    }
  }
  return out;
}

/// Two-sided KS statistic of sorted samples against a CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
