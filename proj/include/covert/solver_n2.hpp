#pragma once

#include <stdexcept>
#include <utility>

#include "covert/solve_result.hpp"

namespace covert {

/// c lies outside [|r1 - r2|, r1 + r2].
class InfeasibleMagnitude : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One of the two cascade terms has zero magnitude.
class DegenerateElement : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Both phase solutions of |z1 e^{j phi1} + z2| = c with phi2 = 0.
///
/// The first uses the principal arccos branch; the second mirrors z1 about
/// the direction of z2. At the ends of the feasible interval they coincide
/// and both are still returned.
std::pair<double, double> solve_magnitude_n2(const CascadeTerm& z1, const CascadeTerm& z2, double c);

struct N2Candidates {
  PhaseVector phi_a;
  PhaseVector phi_b;
  double residual_a = 0.0;
  double residual_b = 0.0;
  double bob_snr_a = 0.0;
  double bob_snr_b = 0.0;
};

struct N2Solution {
  SolveResult result;
  N2Candidates candidates;
};

/// Closed-form perfect-covertness solver for two IRS elements: both magnitude
/// solutions, each rotated to oppose h_aw, then the one with larger Bob SNR.
/// Infeasible instances are reported through result.status.
N2Solution solve_n2(std::span<const CascadeTerm> cascades, ComplexScalar h_aw, const BobContext& bob);

}  // namespace covert
