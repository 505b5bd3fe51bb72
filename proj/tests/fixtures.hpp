#pragma once

// Shared instance builders for the unit and acceptance tests.

#include <initializer_list>
#include <vector>

#include "covert/channel.hpp"
#include "covert/rng.hpp"
#include "covert/solve_result.hpp"
#include "covert/solver_n2.hpp"
#include "oracles.hpp"

namespace fixture {

inline std::vector<covert::CascadeTerm> terms(std::initializer_list<covert::ComplexScalar> zs) {
  std::vector<covert::CascadeTerm> out;
  for (auto z : zs) out.push_back(covert::CascadeTerm::from(z));
  return out;
}

inline std::vector<covert::CascadeTerm> real_terms(const std::vector<double>& r) {
  std::vector<covert::CascadeTerm> out;
  for (double x : r) out.push_back(covert::CascadeTerm::from({x, 0.0}));
  return out;
}

inline std::vector<covert::CascadeTerm> random_terms(std::size_t n, std::uint64_t seed) {
  covert::StreamRng rng(seed, 0);
  std::vector<covert::CascadeTerm> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(covert::CascadeTerm::from({rng.normal(1.0), rng.normal(1.0)}));
  return out;
}

inline covert::PhaseVector random_phases(std::size_t n, std::uint64_t seed, std::uint64_t stream = 1) {
  covert::StreamRng rng(seed, stream);
  std::vector<double> phi(n);
  for (auto& p : phi) p = rng.uniform(0.0, covert::kTwoPi);
  return covert::PhaseVector(phi);
}

inline oracle::Cplx cplx(covert::ComplexScalar z) { return {z.real(), z.imag()}; }

inline std::vector<oracle::Cplx> zs(std::span<const covert::CascadeTerm> c) {
  std::vector<oracle::Cplx> out;
  for (const auto& t : c) out.push_back(cplx(t.z));
  return out;
}

inline std::vector<double> to_vec(const covert::PhaseVector& p) { return {p.values().begin(), p.values().end()}; }

inline double scale_of(std::span<const covert::CascadeTerm> c, covert::ComplexScalar h) {
  double s = std::abs(h);
  for (const auto& t : c) s += t.r;
  return s;
}

/// Feasible N-element instances with all scales 1, drawn in stream order from `seed`.
inline std::vector<covert::LinkInstance> feasible_instances(std::size_t n, std::size_t count, std::uint64_t seed) {
  covert::ChannelParams p;
  p.n_elements = n;
  p.seed = seed;
  std::vector<covert::LinkInstance> out;
  for (std::uint64_t stream = 0; out.size() < count; ++stream) {
    auto inst = covert::LinkInstance::from(covert::sample_realization(p, stream), p);
    if (covert::feasibility_bounds(inst.willie, inst.h_aw).feasible) out.push_back(std::move(inst));
  }
  return out;
}

struct GridComparison {
  bool conditioned = false;  // false: Jacobian too close to singular for the slack to be meaningful
  bool admitted_any = false;
  double grid_best = 0.0;
  double selected = 0.0;
  double slack = 0.0;
};

/// Compares the selected Bob SNR against a constrained grid search.
///
/// tau = (r1 + r2) * cell admits at least the grid point nearest each exact
/// solution. Any admitted point lies within 2 tau / s_min of an exact solution
/// (s_min the smallest singular value of the Willie Jacobian there), and Bob's
/// power changes by at most its gradient bound times that distance.
inline GridComparison compare_with_grid(const covert::LinkInstance& inst, const covert::N2Solution& sol, int points) {
  GridComparison out;
  const auto& w = inst.willie;
  const auto& b = inst.bob;
  const double cell = 2.0 * oracle::kPi / points;
  const double tau = (w[0].r + w[1].r) * cell;

  double s_min = 1e300;
  for (const auto* phi : {&sol.candidates.phi_a, &sol.candidates.phi_b}) {
    const auto w1 = w[0].z * covert::unit_phasor((*phi)[0]);
    const auto w2 = w[1].z * covert::unit_phasor((*phi)[1]);
    // Columns j*w1, j*w2 as real 2x2.
    const double a = -w1.imag(), c = w1.real(), bb = -w2.imag(), d = w2.real();
    const double det = std::abs(a * d - bb * c);
    const double fro2 = a * a + bb * bb + c * c + d * d;
    const double s_max = std::sqrt(0.5 * (fro2 + std::sqrt(std::max(0.0, fro2 * fro2 - 4 * det * det))));
    s_min = std::min(s_min, det / s_max);
  }
  out.conditioned = s_min >= 0.1 * w[0].r * w[1].r / std::hypot(w[0].r, w[1].r);

  const double bob_mag = b[0].r + b[1].r + std::abs(inst.h_ab);
  const double bob_grad = 2.0 * bob_mag * std::hypot(b[0].r, b[1].r);
  const double power_scale = inst.tx_power / inst.noise_var_b;
  out.slack = power_scale * bob_grad * 2.0 * tau / s_min;

  const auto grid = oracle::n2_grid_best(cplx(w[0].z), cplx(w[1].z), cplx(inst.h_aw), cplx(b[0].z), cplx(b[1].z),
                                         cplx(inst.h_ab), points, tau);
  out.admitted_any = grid.admitted > 0;
  out.grid_best = power_scale * grid.best_value;
  out.selected = sol.result.bob_snr;
  return out;
}

}  // namespace fixture
