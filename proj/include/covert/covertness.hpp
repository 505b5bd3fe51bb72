#pragma once

#include <span>
#include <vector>

#include "covert/channel.hpp"

namespace covert {

/// IRS phase program. Entries are kept in [0, 2*pi).
///
/// Solvers apply e^{+j phi_i} to the cascade term z_i. The phase actually
/// programmed into the reflection matrix Diag(e^{-j phi}) is irs_program().
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> phases);
  static PhaseVector zeros(std::size_t n) { return PhaseVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return phases_.size(); }
  bool empty() const noexcept { return phases_.empty(); }
  double operator[](std::size_t i) const { return phases_[i]; }
  std::span<const double> values() const noexcept { return phases_; }

  void set(std::size_t i, double phase);
  /// Adds a common offset to every entry.
  PhaseVector rotated(double offset) const;
  /// Negated phases, as programmed into Diag(e^{-j phi}).
  PhaseVector irs_program() const;

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> phases_;
};

struct FeasibilityBounds {
  double min_mag = 0.0;
  double max_mag = 0.0;
  double direct_mag = 0.0;
  bool feasible = false;
};

/// sum_i z_i e^{j phi_i}
ComplexScalar indirect_sum(const PhaseVector& phases, std::span<const CascadeTerm> cascades);

/// |indirect_sum + h_aw|^2
double willie_power(const PhaseVector& phases, std::span<const CascadeTerm> cascades, ComplexScalar h_aw);

/// P_a |sum g e^{j phi} h + h_direct|^2 / noise_var for the chosen receiver.
double snr(const PhaseVector& phases, const ChannelRealization& realization, const ChannelParams& params,
           Receiver receiver);

/// Polygon bounds on |sum z e^{j phi}| and the perfect-covertness verdict
/// min_mag <= |h_aw| <= max_mag. Throws std::invalid_argument when empty.
FeasibilityBounds feasibility_bounds(std::span<const CascadeTerm> cascades, ComplexScalar h_aw);

/// KL divergence D(P0 || P1) between Willie's output laws CN(0, 2 sw^2) and
/// CN(0, gain * P_a + 2 sw^2); zero iff gain == 0.
double kl_divergence_from_gain(double gain_power, double tx_power, double noise_var_w);
double kl_divergence_willie(const PhaseVector& phases, const ChannelRealization& realization,
                            const ChannelParams& params);

/// Pinsker lower bound on alpha + beta: 1 - sqrt(kl / 2). Not clamped.
double detection_error_bound(double kl);

/// Rotates every phase so that the indirect sum points opposite h_aw
/// (phi += pi + angle(h_aw) - angle(sum)).
PhaseVector cancel_direct_path(const PhaseVector& phases, std::span<const CascadeTerm> cascades,
                               ComplexScalar h_aw);

}  // namespace covert
