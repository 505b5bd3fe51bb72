#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "covert/solver_gd.hpp"

namespace covert {

namespace {

constexpr double kRootTol = 1e-12;  // relative to sum r + target

double group_sum(std::span<const CascadeTerm> cascades, const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (auto i : idx) s += cascades[i].r;
  return s;
}

std::vector<std::size_t> index_range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out(hi - lo);
  std::iota(out.begin(), out.end(), lo);
  return out;
}

}  // namespace

ConstructiveResult solve_constructive(std::span<const CascadeTerm> cascades, double target_mag) {
  const std::size_t n = cascades.size();
  if (n < 4) throw std::invalid_argument("solve_constructive: requires at least four elements");
  if (!(target_mag >= 0.0)) throw std::invalid_argument("solve_constructive: target must be nonnegative");

  ConstructiveResult out;
  out.phases = PhaseVector::zeros(n);
  if (!feasibility_bounds(cascades, ComplexScalar{target_mag, 0.0}).feasible) {
    out.status = ConstructiveStatus::Infeasible;
    return out;
  }

  // Two halves of 2*(N/4) elements each; leftover elements join the heavier one.
  const std::size_t quarter = n / 4;
  auto first = index_range(0, 2 * quarter);
  auto second = index_range(2 * quarter, 4 * quarter);
  const auto leftover = index_range(4 * quarter, n);
  const bool first_heavier = group_sum(cascades, first) >= group_sum(cascades, second);
  auto& heavy = first_heavier ? first : second;
  const auto& light = first_heavier ? second : first;
  heavy.insert(heavy.end(), leftover.begin(), leftover.end());

  // Split the heavy group into alpha <= beta.
  const auto half = static_cast<std::ptrdiff_t>(heavy.size() / 2);
  std::vector<std::size_t> group_a(heavy.begin(), heavy.begin() + half);
  std::vector<std::size_t> group_b(heavy.begin() + half, heavy.end());
  double alpha = group_sum(cascades, group_a);
  double beta = group_sum(cascades, group_b);
  if (alpha > beta) {
    std::swap(alpha, beta);
    std::swap(group_a, group_b);
  }

  // Light group sits at phase pi and the anchor (target) at phase 0, so the
  // alpha/beta pair must contribute the real value `need`.
  const double gamma = group_sum(cascades, light);
  const double need = gamma - target_mag;
  const double reach = std::abs(need);
  const double scale = alpha + beta + gamma + target_mag;
  if (reach > alpha + beta || reach < beta - alpha) {
    out.status = ConstructiveStatus::ConstructionFailed;
    return out;
  }

  // Pair magnitude along the real axis once the imaginary parts cancel;
  // strictly decreasing from alpha + beta at 0 to beta - alpha at pi.
  auto beta_angle = [&](double phi_a) {
    return beta > 0.0 ? -std::asin(std::clamp(alpha / beta * std::sin(phi_a), -1.0, 1.0)) : 0.0;
  };
  auto pair_real = [&](double phi_a) { return alpha * std::cos(phi_a) + beta * std::cos(beta_angle(phi_a)); };

  double phi_a = 0.0;
  if (pair_real(0.0) <= reach) {
    phi_a = 0.0;
  } else if (pair_real(kPi) >= reach) {
    phi_a = kPi;
  } else {
    double lo = 0.0;
    double hi = kPi;
    while (out.bisection_iterations < 200) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ++out.bisection_iterations;
      const double g = pair_real(mid) - reach;
      if (g == 0.0) {
        lo = hi = mid;
        break;
      }
      (g > 0.0 ? lo : hi) = mid;
    }
    phi_a = 0.5 * (lo + hi);
  }
  const double phi_b = beta_angle(phi_a);
  const double pair_dir = need >= 0.0 ? 0.0 : kPi;

  std::vector<double> phi(n, 0.0);
  for (auto i : group_a) phi[i] = pair_dir + phi_a - cascades[i].phase_z;
  for (auto i : group_b) phi[i] = pair_dir + phi_b - cascades[i].phase_z;
  for (auto i : light) phi[i] = kPi - cascades[i].phase_z;
  out.phases = PhaseVector(std::move(phi));

  const double achieved = std::abs(indirect_sum(out.phases, cascades));
  out.status = std::abs(achieved - target_mag) <= kRootTol * scale ? ConstructiveStatus::Constructed
                                                                   : ConstructiveStatus::ConstructionFailed;
  return out;
}

SolveResult solve_constructive_covert(std::span<const CascadeTerm> cascades, ComplexScalar h_aw,
                                      const GdConfig& fallback, const BobContext& bob) {
  if (cascades.size() < 4) return solve_gd(cascades, h_aw, fallback, bob);
  const ConstructiveResult built = solve_constructive(cascades, std::abs(h_aw));
  if (built.status == ConstructiveStatus::Infeasible) {
    SolveResult result;
    result.phases = PhaseVector::zeros(cascades.size());
    result.status = SolveStatus::Infeasible;
    evaluate_link(result, cascades, h_aw, bob);
    return result;
  }
  if (built.status == ConstructiveStatus::ConstructionFailed) return solve_gd(cascades, h_aw, fallback, bob);

  SolveResult result;
  result.phases = cancel_direct_path(built.phases, cascades, h_aw);
  result.iterations = built.bisection_iterations;
  result.classification = classify_critical_point(built.phases, cascades, std::abs(h_aw), fallback.crit_tol,
                                                  fallback.residual_tol);
  evaluate_link(result, cascades, h_aw, bob);
  double scale = std::abs(h_aw);
  for (const auto& c : cascades) scale += c.r;
  result.status = result.residual_power <= fallback.residual_tol * scale * scale ? SolveStatus::Converged
                                                                                 : SolveStatus::MaxIterations;
  return result;
}

}  // namespace covert
