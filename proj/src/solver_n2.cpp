#include "covert/solver_n2.hpp"

#include <algorithm>
#include <cmath>

namespace covert {

namespace {

constexpr double kArccosSlack = 1e-9;
constexpr double kResidualTol = 1e-12;  // relative to (r1 + r2 + |h_aw|)^2

double bob_snr_at(const PhaseVector& phases, const BobContext& bob) {
  return bob.tx_power * willie_power(phases, bob.cascades, bob.h_ab) / bob.noise_var_b;
}

// Best phase for a Willie-free element: align its Bob term with everything else.
double align_with(const CascadeTerm& bob_term, ComplexScalar rest) { return angle_of(rest) - bob_term.phase_z; }

// One element carries no Willie energy. The other must match |h_aw| on its own
// and the idle element serves Bob.
N2Solution solve_degenerate(std::span<const CascadeTerm> w, ComplexScalar h_aw, const BobContext& bob,
                            double scale) {
  N2Solution out;
  SolveResult& res = out.result;
  const double c = std::abs(h_aw);
  const bool zero1 = w[0].r == 0.0;
  const bool zero2 = w[1].r == 0.0;
  std::vector<double> phi(2, 0.0);

  if (zero1 && zero2) {
    if (c > kResidualTol * scale) {
      res.phases = PhaseVector::zeros(2);
      res.status = SolveStatus::Infeasible;
      evaluate_link(res, w, h_aw, bob);
      return out;
    }
    const ComplexScalar anchor = bob.h_ab != ComplexScalar{} ? bob.h_ab : bob.cascades[1].z;
    phi[0] = align_with(bob.cascades[0], anchor);
    phi[1] = align_with(bob.cascades[1], anchor);
  } else {
    const std::size_t live = zero1 ? 1 : 0;
    const std::size_t idle = 1 - live;
    if (std::abs(w[live].r - c) > std::sqrt(kResidualTol) * scale) {
      res.phases = PhaseVector::zeros(2);
      res.status = SolveStatus::Infeasible;
      evaluate_link(res, w, h_aw, bob);
      return out;
    }
    phi[live] = angle_of(h_aw) + kPi - w[live].phase_z;
    phi[idle] = align_with(bob.cascades[idle], bob.cascades[live].z * unit_phasor(phi[live]) + bob.h_ab);
  }

  res.phases = PhaseVector(phi);
  res.status = SolveStatus::Converged;
  res.classification = CriticalClass::GlobalMinimum;
  evaluate_link(res, w, h_aw, bob);
  out.candidates = {res.phases, res.phases, res.residual_power, res.residual_power, res.bob_snr, res.bob_snr};
  return out;
}

}  // namespace

std::pair<double, double> solve_magnitude_n2(const CascadeTerm& z1, const CascadeTerm& z2, double c) {
  if (z1.r == 0.0 || z2.r == 0.0) throw DegenerateElement("solve_magnitude_n2: zero-magnitude cascade term");
  if (!(c >= 0.0)) throw InfeasibleMagnitude("solve_magnitude_n2: target magnitude must be nonnegative");
  double arg = (c * c - (z1.r * z1.r + z2.r * z2.r)) / (2.0 * z1.r * z2.r);
  if (arg < -1.0 - kArccosSlack || arg > 1.0 + kArccosSlack) {
    throw InfeasibleMagnitude("solve_magnitude_n2: target outside [|r1 - r2|, r1 + r2]");
  }
  arg = std::clamp(arg, -1.0, 1.0);
  const double first = z2.phase_z - z1.phase_z + std::acos(arg);
  const double second = first + 2.0 * (z2.phase_z - (z1.phase_z + first));
  return {first, second};
}

N2Solution solve_n2(std::span<const CascadeTerm> cascades, ComplexScalar h_aw, const BobContext& bob) {
  if (cascades.size() != 2 || bob.cascades.size() != 2) {
    throw std::invalid_argument("solve_n2: requires exactly two IRS elements");
  }
  const double scale = cascades[0].r + cascades[1].r + std::abs(h_aw);
  if (cascades[0].r == 0.0 || cascades[1].r == 0.0) return solve_degenerate(cascades, h_aw, bob, scale);

  N2Solution out;
  SolveResult& res = out.result;
  const FeasibilityBounds bounds = feasibility_bounds(cascades, h_aw);
  if (!bounds.feasible) {
    res.phases = PhaseVector::zeros(2);
    res.status = SolveStatus::Infeasible;
    evaluate_link(res, cascades, h_aw, bob);
    return out;
  }

  const auto [phi1_a, phi1_b] = solve_magnitude_n2(cascades[0], cascades[1], bounds.direct_mag);
  N2Candidates& cand = out.candidates;
  cand.phi_a = cancel_direct_path(PhaseVector({phi1_a, 0.0}), cascades, h_aw);
  cand.phi_b = cancel_direct_path(PhaseVector({phi1_b, 0.0}), cascades, h_aw);
  cand.residual_a = willie_power(cand.phi_a, cascades, h_aw);
  cand.residual_b = willie_power(cand.phi_b, cascades, h_aw);
  cand.bob_snr_a = bob_snr_at(cand.phi_a, bob);
  cand.bob_snr_b = bob_snr_at(cand.phi_b, bob);

  res.phases = cand.bob_snr_b > cand.bob_snr_a ? cand.phi_b : cand.phi_a;
  evaluate_link(res, cascades, h_aw, bob);
  const bool cancelled = res.residual_power <= kResidualTol * scale * scale;
  res.status = cancelled ? SolveStatus::Converged : SolveStatus::MaxIterations;
  res.classification = cancelled ? CriticalClass::GlobalMinimum : CriticalClass::NonCritical;
  return out;
}

}  // namespace covert
