#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "covert/covertness.hpp"

namespace covert {

enum class SolveStatus { Converged, Infeasible, MaxIterations, SaddleDetected };

enum class CriticalClass { GlobalMinimum, StrictSaddle, GlobalMaximum, NonCritical };

std::string_view to_string(SolveStatus status) noexcept;
std::string_view to_string(CriticalClass cls) noexcept;

struct SolveResult {
  PhaseVector phases;
  double residual_power = 0.0;  // Willie received power at phases
  double bob_snr = 0.0;
  double willie_snr = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Infeasible;
  CriticalClass classification = CriticalClass::NonCritical;
};

/// Bob's side of the link plus the power budget needed to report SNRs.
struct BobContext {
  std::span<const CascadeTerm> cascades;
  ComplexScalar h_ab{};
  double tx_power = 1.0;
  double noise_var_w = 1.0;
  double noise_var_b = 1.0;
};

/// Owning view of one sampled scenario, ready for the solvers.
struct LinkInstance {
  std::vector<CascadeTerm> willie;
  std::vector<CascadeTerm> bob;
  ComplexScalar h_aw{};
  ComplexScalar h_ab{};
  double tx_power = 1.0;
  double noise_var_w = 1.0;
  double noise_var_b = 1.0;

  static LinkInstance from(const ChannelRealization& realization, const ChannelParams& params);
  BobContext bob_context() const { return {bob, h_ab, tx_power, noise_var_w, noise_var_b}; }
};

/// Fills residual_power, willie_snr and bob_snr for the given phases.
void evaluate_link(SolveResult& result, std::span<const CascadeTerm> willie, ComplexScalar h_aw,
                   const BobContext& bob);

}  // namespace covert
