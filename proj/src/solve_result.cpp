#include "covert/solve_result.hpp"

namespace covert {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::SaddleDetected: return "SaddleDetected";
  }
  return "?";
}

std::string_view to_string(CriticalClass cls) noexcept {
  switch (cls) {
    case CriticalClass::GlobalMinimum: return "GlobalMinimum";
    case CriticalClass::StrictSaddle: return "StrictSaddle";
    case CriticalClass::GlobalMaximum: return "GlobalMaximum";
    case CriticalClass::NonCritical: return "NonCritical";
  }
  return "?";
}

LinkInstance LinkInstance::from(const ChannelRealization& realization, const ChannelParams& params) {
  LinkInstance inst;
  inst.willie = cascade_terms(realization, Receiver::Willie);
  inst.bob = cascade_terms(realization, Receiver::Bob);
  inst.h_aw = realization.h_aw;
  inst.h_ab = realization.h_ab;
  inst.tx_power = params.tx_power;
  inst.noise_var_w = params.noise_var_w;
  inst.noise_var_b = params.noise_var_b;
  return inst;
}

void evaluate_link(SolveResult& result, std::span<const CascadeTerm> willie, ComplexScalar h_aw,
                   const BobContext& bob) {
  result.residual_power = willie_power(result.phases, willie, h_aw);
  result.willie_snr = bob.tx_power * result.residual_power / bob.noise_var_w;
  result.bob_snr = bob.tx_power * willie_power(result.phases, bob.cascades, bob.h_ab) / bob.noise_var_b;
}

}  // namespace covert
