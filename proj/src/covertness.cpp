#include "covert/covertness.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace covert {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* fn) {
  if (a != b) throw std::invalid_argument(std::string(fn) + ": phase/cascade length mismatch");
}

}  // namespace

PhaseVector::PhaseVector(std::vector<double> phases) : phases_(std::move(phases)) {
  for (double& p : phases_) p = wrap_two_pi(p);
}

void PhaseVector::set(std::size_t i, double phase) { phases_.at(i) = wrap_two_pi(phase); }

PhaseVector PhaseVector::rotated(double offset) const {
  std::vector<double> out(phases_);
  for (double& p : out) p += offset;
  return PhaseVector(std::move(out));
}

PhaseVector PhaseVector::irs_program() const {
  std::vector<double> out(phases_);
  for (double& p : out) p = -p;
  return PhaseVector(std::move(out));
}

ComplexScalar indirect_sum(const PhaseVector& phases, std::span<const CascadeTerm> cascades) {
  require_same_length(phases.size(), cascades.size(), "indirect_sum");
  ComplexScalar sum{};
  for (std::size_t i = 0; i < cascades.size(); ++i) sum += cascades[i].z * unit_phasor(phases[i]);
  return sum;
}

double willie_power(const PhaseVector& phases, std::span<const CascadeTerm> cascades, ComplexScalar h_aw) {
  return std::norm(indirect_sum(phases, cascades) + h_aw);
}

double snr(const PhaseVector& phases, const ChannelRealization& realization, const ChannelParams& params,
           Receiver receiver) {
  if (phases.size() != realization.n_elements()) throw std::invalid_argument("snr: dimension mismatch");
  const auto cascades = cascade_terms(realization, receiver);
  const bool willie = receiver == Receiver::Willie;
  const ComplexScalar direct = willie ? realization.h_aw : realization.h_ab;
  const double noise = willie ? params.noise_var_w : params.noise_var_b;
  return params.tx_power * std::norm(indirect_sum(phases, cascades) + direct) / noise;
}

FeasibilityBounds feasibility_bounds(std::span<const CascadeTerm> cascades, ComplexScalar h_aw) {
  if (cascades.empty()) throw std::invalid_argument("feasibility_bounds: empty cascade list");
  double total = 0.0;
  double largest = 0.0;
  for (const auto& c : cascades) {
    total += c.r;
    largest = std::max(largest, c.r);
  }
  FeasibilityBounds b;
  b.max_mag = total;
  b.min_mag = std::max(0.0, 2.0 * largest - total);
  b.direct_mag = std::abs(h_aw);
  b.feasible = b.min_mag <= b.direct_mag && b.direct_mag <= b.max_mag;
  return b;
}

double kl_divergence_from_gain(double gain_power, double tx_power, double noise_var_w) {
  if (gain_power <= 0.0) return 0.0;
  const double q = gain_power * tx_power / (2.0 * noise_var_w);
  if (q < 1e-3) {
    // ln(1+q) + 1/(1+q) - 1 = sum_{n>=2} (-1)^n (n-1)/n q^n
    double term = q * q;
    double sum = 0.0;
    for (int n = 2; n <= 8; ++n) {
      sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1.0) / n * term;
      term *= q;
    }
    return sum;
  }
  return std::log1p(q) + 1.0 / (1.0 + q) - 1.0;
}

double kl_divergence_willie(const PhaseVector& phases, const ChannelRealization& realization,
                            const ChannelParams& params) {
  if (phases.size() != realization.n_elements()) throw std::invalid_argument("kl_divergence_willie: dimension mismatch");
  const auto cascades = cascade_terms(realization, Receiver::Willie);
  const double gain = willie_power(phases, cascades, realization.h_aw);
  return kl_divergence_from_gain(gain, params.tx_power, params.noise_var_w);
}

double detection_error_bound(double kl) {
  if (kl < 0.0) throw std::domain_error("detection_error_bound: kl must be nonnegative");
  return 1.0 - std::sqrt(kl / 2.0);
}

PhaseVector cancel_direct_path(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                               ComplexScalar h_aw) {
  const double total = angle_of(indirect_sum(phases, cascades));
  return phases.rotated(kPi + angle_of(h_aw) - total);
}

}  // namespace covert
