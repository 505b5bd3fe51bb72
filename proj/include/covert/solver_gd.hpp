#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "covert/solve_result.hpp"

namespace covert {

struct UniformRandomInit {
  std::uint64_t seed = 0;
};

/// Start from the given phases; any restarts draw from restart_seed.
struct ProvidedInit {
  PhaseVector phases;
  std::uint64_t restart_seed = 0;
};

using InitPolicy = std::variant<UniformRandomInit, ProvidedInit>;

/// One accepted or rejected gradient step, for convergence traces.
struct GdIterate {
  std::size_t attempt = 0;
  std::size_t iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct GdConfig {
  double step = 0.0;  // <= 0 selects 1/N
  double delta = 0.0;  // <= 0 selects kDefaultRelativeDelta * scale^2
  std::size_t max_iterations = 100000;
  std::size_t restarts = 4;
  InitPolicy init_policy = UniformRandomInit{};
  double residual_tol = 1e-10;  // relative to scale^2, scale = sum r + |h_aw|
  double crit_tol = 1e-6;
  std::function<void(const GdIterate&)> trace;

  static constexpr double kDefaultRelativeDelta = 1e-30;
};

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// f(phi) = |anchor_mag + sum z_i e^{j phi_i}|^2 and its gradient
/// [grad f]_k = -2 r_k |c_k| sin(angle(z_k e^{j phi_k}) - angle(c_k)),
/// where c_k is the anchor plus every term except the k-th.
ObjectiveValue objective_and_gradient(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                                      double anchor_mag);

/// max_k |sin(angle(z_k e^{j phi_k}) - angle(c_k))|, skipping terms where
/// r_k or |c_k| vanish at the objective's scale.
double criticality_residual(const PhaseVector& phases, std::span<const CascadeTerm> cascades, ComplexScalar anchor);

CriticalClass classify_critical_point(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                                      double anchor_mag, double crit_tol = 1e-6, double value_tol = 1e-10);

/// Gradient descent on f with the anchor standing in for |h_aw|, followed by
/// the rotation that cancels h_aw. Restarts from fresh random phases when the
/// residual stays above residual_tol.
SolveResult solve_gd(std::span<const CascadeTerm> cascades, ComplexScalar h_aw, const GdConfig& config,
                     const BobContext& bob);

/// Eigenvalues (ascending) of the Hessian of the three-term objective in
/// tau1 = phi1 - phi2, tau2 = phi2 - phi3 at the critical point (0, 0, pi).
std::pair<double, double> hessian_eigs_n3(double r1, double r2, double r3);

/// Gradient Lipschitz constant 2 C N with C = 2 (max r)^2.
double lipschitz_bound(std::span<const CascadeTerm> cascades);

enum class ConstructiveStatus { Constructed, ConstructionFailed, Infeasible };

struct ConstructiveResult {
  ConstructiveStatus status = ConstructiveStatus::ConstructionFailed;
  PhaseVector phases;
  std::size_t bisection_iterations = 0;
};

/// Two-group construction reaching |sum z e^{j phi}| = target_mag: one group
/// is laid at phase pi, the other is split into two sub-sums alpha <= beta
/// whose imaginary parts cancel, and the remaining angle is found by
/// bisection. Requires N >= 4.
ConstructiveResult solve_constructive(std::span<const CascadeTerm> cascades, double target_mag);

/// solve_constructive plus cancellation of h_aw; falls back to solve_gd when
/// the construction fails.
SolveResult solve_constructive_covert(std::span<const CascadeTerm> cascades, ComplexScalar h_aw,
                                      const GdConfig& fallback, const BobContext& bob);

}  // namespace covert
