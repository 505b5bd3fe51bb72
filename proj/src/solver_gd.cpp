#include "covert/solver_gd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "covert/rng.hpp"

namespace covert {

namespace {

// Below this fraction of the objective scale a vector is treated as zero and
// its angle carries no information.
constexpr double kNegligible = 1e-12;
constexpr double kMinStepRatio = 1e-20;
constexpr double kArmijo = 1e-4;

double magnitude_scale(std::span<const CascadeTerm> cascades, double anchor_mag) {
  double s = anchor_mag;
  for (const auto& c : cascades) s += c.r;
  return s;
}

// Squared polygon minimum and maximum of |anchor + sum r_i e^{j theta_i}|.
std::pair<double, double> polygon_extrema(std::span<const CascadeTerm> cascades, double anchor_mag) {
  double total = anchor_mag;
  double largest = anchor_mag;
  for (const auto& c : cascades) {
    total += c.r;
    largest = std::max(largest, c.r);
  }
  const double lo = std::max(0.0, 2.0 * largest - total);
  return {lo * lo, total * total};
}

PhaseVector random_phases(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  std::vector<double> phi(n);
  for (double& p : phi) p = rng.uniform(0.0, kTwoPi);
  return PhaseVector(std::move(phi));
}

PhaseVector initial_phases(const InitPolicy& policy, std::size_t n, std::size_t attempt) {
  if (const auto* provided = std::get_if<ProvidedInit>(&policy)) {
    if (attempt == 0) {
      if (provided->phases.size() != n) throw std::invalid_argument("solve_gd: provided phases have wrong length");
      return provided->phases;
    }
    return random_phases(n, provided->restart_seed, attempt);
  }
  return random_phases(n, std::get<UniformRandomInit>(policy).seed, attempt);
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

enum class StopReason { Stalled, IterationCap };

struct Descent {
  PhaseVector phases;
  std::size_t iterations = 0;
  StopReason reason = StopReason::IterationCap;
};

Descent descend(PhaseVector phi, std::span<const CascadeTerm> cascades, double anchor_mag, double step,
                double delta, const GdConfig& config, std::size_t attempt) {
  Descent out;
  const double initial_step = step;
  ObjectiveValue current = objective_and_gradient(phi, cascades, anchor_mag);
  std::vector<double> trial(phi.size());
  std::size_t it = 0;
  while (it < config.max_iterations) {
    for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = phi[k] - step * current.gradient[k];
    PhaseVector next(trial);
    ObjectiveValue candidate = objective_and_gradient(next, cascades, anchor_mag);
    ++it;
    if (config.trace) config.trace({attempt, it, candidate.value, norm2(candidate.gradient), step});
    const double gnorm = norm2(current.gradient);
    if (candidate.value >= current.value - kArmijo * step * gnorm * gnorm) {
      // Step too long for the local curvature: reject and halve. Insufficient
      // decrease counts as too long as well; otherwise a step that nearly
      // mirrors the iterate across a minimum is accepted forever.
      step *= 0.5;
      if (step < kMinStepRatio * initial_step) {
        out.reason = StopReason::Stalled;
        break;
      }
      continue;
    }
    const double change = current.value - candidate.value;
    phi = std::move(next);
    current = std::move(candidate);
    if (change <= delta) {
      out.reason = StopReason::Stalled;
      break;
    }
  }
  out.phases = std::move(phi);
  out.iterations = it;
  return out;
}

}  // namespace

ObjectiveValue objective_and_gradient(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                                      double anchor_mag) {
  if (phases.size() != cascades.size()) throw std::invalid_argument("objective_and_gradient: length mismatch");
  if (!(anchor_mag >= 0.0)) throw std::invalid_argument("objective_and_gradient: anchor must be nonnegative");
  const std::size_t n = cascades.size();
  std::vector<ComplexScalar> terms(n);
  ComplexScalar total{anchor_mag, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    terms[k] = cascades[k].z * unit_phasor(phases[k]);
    total += terms[k];
  }
  ObjectiveValue out;
  out.value = std::norm(total);
  out.gradient.resize(n);
  // r_k |c_k| sin(angle(w_k) - angle(c_k)) = Im(w_k conj(c_k)) = Im(w_k conj(total)).
  for (std::size_t k = 0; k < n; ++k) out.gradient[k] = -2.0 * (terms[k] * std::conj(total)).imag();
  return out;
}

double criticality_residual(const PhaseVector& phases, std::span<const CascadeTerm> cascades, ComplexScalar anchor) {
  if (phases.size() != cascades.size()) throw std::invalid_argument("criticality_residual: length mismatch");
  const std::size_t n = cascades.size();
  std::vector<ComplexScalar> terms(n);
  ComplexScalar total = anchor;
  for (std::size_t k = 0; k < n; ++k) {
    terms[k] = cascades[k].z * unit_phasor(phases[k]);
    total += terms[k];
  }
  const double floor = kNegligible * magnitude_scale(cascades, std::abs(anchor));
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexScalar others = total - terms[k];
    const double rk = cascades[k].r;
    const double ck = std::abs(others);
    if (rk <= floor || ck <= floor) continue;
    worst = std::max(worst, std::abs((terms[k] * std::conj(total)).imag()) / (rk * ck));
  }
  return worst;
}

CriticalClass classify_critical_point(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                                      double anchor_mag, double crit_tol, double value_tol) {
  if (criticality_residual(phases, cascades, ComplexScalar{anchor_mag, 0.0}) > crit_tol) {
    return CriticalClass::NonCritical;
  }
  const double scale = magnitude_scale(cascades, anchor_mag);
  const double slack = value_tol * scale * scale;
  const double value = objective_and_gradient(phases, cascades, anchor_mag).value;
  const auto [lo, hi] = polygon_extrema(cascades, anchor_mag);
  if (value <= lo + slack) return CriticalClass::GlobalMinimum;
  if (value >= hi - slack) return CriticalClass::GlobalMaximum;
  // Remaining critical points are co-axial and carry a negative curvature direction.
  return CriticalClass::StrictSaddle;
}

SolveResult solve_gd(std::span<const CascadeTerm> cascades, ComplexScalar h_aw, const GdConfig& config,
                     const BobContext& bob) {
  if (cascades.empty()) throw std::invalid_argument("solve_gd: empty cascade list");
  if (bob.cascades.size() != cascades.size()) throw std::invalid_argument("solve_gd: Bob/Willie length mismatch");
  if (config.max_iterations == 0) throw std::invalid_argument("solve_gd: max_iterations must be >= 1");
  const std::size_t n = cascades.size();
  const double anchor = std::abs(h_aw);
  const double scale = magnitude_scale(cascades, anchor);

  SolveResult result;
  if (!feasibility_bounds(cascades, h_aw).feasible) {
    result.phases = PhaseVector::zeros(n);
    result.status = SolveStatus::Infeasible;
    evaluate_link(result, cascades, h_aw, bob);
    return result;
  }
  if (scale == 0.0) {
    result.phases = PhaseVector::zeros(n);
    result.status = SolveStatus::Converged;
    result.classification = CriticalClass::GlobalMinimum;
    evaluate_link(result, cascades, h_aw, bob);
    return result;
  }

  const double step = config.step > 0.0 ? config.step : 1.0 / static_cast<double>(n);
  const double delta = config.delta > 0.0 ? config.delta : GdConfig::kDefaultRelativeDelta * scale * scale;
  const double tol = config.residual_tol * scale * scale;

  std::size_t total_iterations = 0;
  for (std::size_t attempt = 0; attempt <= config.restarts; ++attempt) {
    Descent run = descend(initial_phases(config.init_policy, n, attempt), cascades, anchor, step, delta, config,
                          attempt);
    total_iterations += run.iterations;

    result.phases = cancel_direct_path(run.phases, cascades, h_aw);
    result.iterations = total_iterations;
    result.classification = classify_critical_point(run.phases, cascades, anchor, config.crit_tol, config.residual_tol);
    evaluate_link(result, cascades, h_aw, bob);
    if (result.residual_power <= tol) {
      result.status = SolveStatus::Converged;
      return result;
    }
    const bool at_saddle = result.classification == CriticalClass::StrictSaddle ||
                           result.classification == CriticalClass::GlobalMaximum;
    result.status = run.reason == StopReason::Stalled && at_saddle ? SolveStatus::SaddleDetected
                                                                  : SolveStatus::MaxIterations;
  }
  return result;
}

std::pair<double, double> hessian_eigs_n3(double r1, double r2, double r3) {
  if (!(r1 > 0.0 && r2 > 0.0 && r3 > 0.0)) throw std::invalid_argument("hessian_eigs_n3: magnitudes must be positive");
  const double mid = 2.0 * r1 * r3 - r2 * (r1 - r3);
  const double root = std::sqrt(2.0 * r1 * r2 * r2 * r3 + r2 * r2 * r3 * r3 + r1 * r1 * (r2 * r2 + 4.0 * r3 * r3));
  // mid^2 - root^2 = det = 4 r1 r2 r3 (r3 - r1 - r2); recover the smaller-magnitude
  // root from the determinant to avoid cancellation near r3 = r1 + r2.
  const double det = 4.0 * r1 * r2 * r3 * (r3 - r1 - r2);
  if (mid >= 0.0) {
    const double upper = mid + root;
    return {det / upper, upper};
  }
  const double lower = mid - root;
  return {lower, det / lower};
}

double lipschitz_bound(std::span<const CascadeTerm> cascades) {
  if (cascades.empty()) throw std::invalid_argument("lipschitz_bound: empty cascade list");
  double largest = 0.0;
  for (const auto& c : cascades) largest = std::max(largest, c.r);
  const double c = 2.0 * largest * largest;
  return 2.0 * c * static_cast<double>(cascades.size());
}

}  // namespace covert
