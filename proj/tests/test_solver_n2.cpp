#include <doctest.h>

#include "covert/solver_n2.hpp"
#include "fixtures.hpp"

using namespace covert;
using fixture::real_terms;
using fixture::terms;

namespace {

BobContext unit_bob(std::span<const CascadeTerm> bob) { return {bob, {0.0, 0.0}, 1.0, 1.0, 1.0}; }

}  // namespace

TEST_CASE("magnitude solutions, hand-evaluated") {
  const auto one = CascadeTerm::from({1.0, 0.0});
  auto [a, b] = solve_magnitude_n2(one, one, std::sqrt(2.0));
  CHECK(a == doctest::Approx(kPi / 2));
  CHECK(std::abs(std::exp(ComplexScalar{0.0, a}) + 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(std::exp(ComplexScalar{0.0, b}) + 1.0) == doctest::Approx(std::sqrt(2.0)));

  std::tie(a, b) = solve_magnitude_n2(one, one, 0.0);
  CHECK(a == doctest::Approx(kPi));
  CHECK(std::abs(std::exp(ComplexScalar{0.0, a}) + 1.0) <= 1e-15);

  const auto two = CascadeTerm::from({2.0, 0.0});
  std::tie(a, b) = solve_magnitude_n2(two, one, std::sqrt(3.0));
  CHECK(a == doctest::Approx(2 * kPi / 3));
  CHECK(std::norm(2.0 * std::exp(ComplexScalar{0.0, a}) + 1.0) == doctest::Approx(3.0));
  // Mirror image about z2's direction.
  CHECK(wrap_two_pi(b) == doctest::Approx(wrap_two_pi(-2 * kPi / 3)));
}

TEST_CASE("magnitude solutions reproduce c for general phases") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto z = fixture::random_terms(2, seed);
    StreamRng rng(seed, 9);
    const double lo = std::abs(z[0].r - z[1].r), hi = z[0].r + z[1].r;
    const double c = rng.uniform(lo, hi);
    const auto [a, b] = solve_magnitude_n2(z[0], z[1], c);
    for (double phi : {a, b}) {
      const double got = std::abs(z[0].z * unit_phasor(phi) + z[1].z);
      CHECK(std::abs(got - c) <= 1e-12 * hi);
    }
  }
}

TEST_CASE("endpoint targets return coincident solutions") {
  const auto z = real_terms({2.0, 1.0});
  auto [a, b] = solve_magnitude_n2(z[0], z[1], 3.0);
  CHECK(std::abs(wrap_pi(a - b)) <= 1e-12);
  std::tie(a, b) = solve_magnitude_n2(z[0], z[1], 1.0);
  CHECK(std::abs(wrap_pi(a - b)) <= 1e-12);
  // A hair outside the interval is still accepted as rounding.
  CHECK_NOTHROW(solve_magnitude_n2(z[0], z[1], 3.0 * (1 + 1e-12)));
}

TEST_CASE("magnitude solver errors") {
  const auto z = real_terms({2.0, 1.0, 0.0});
  CHECK_THROWS_AS(solve_magnitude_n2(z[0], z[1], 3.5), InfeasibleMagnitude);
  CHECK_THROWS_AS(solve_magnitude_n2(z[0], z[1], 0.5), InfeasibleMagnitude);
  CHECK_THROWS_AS(solve_magnitude_n2(z[0], z[2], 1.0), DegenerateElement);
}

TEST_CASE("solve_n2: full cancellation of unit terms") {
  const auto w = terms({1.0, 1.0});
  const auto b = terms({1.0, ComplexScalar{0.0, 1.0}});
  const auto sol = solve_n2(w, 0.0, unit_bob(b));
  CHECK(sol.result.status == SolveStatus::Converged);
  CHECK(sol.result.classification == CriticalClass::GlobalMinimum);
  CHECK(sol.result.residual_power <= 1e-30);
  CHECK(sol.result.willie_snr <= 1e-30);
  CHECK(std::abs(wrap_pi(sol.result.phases[0] - sol.result.phases[1])) == doctest::Approx(kPi));
}

TEST_CASE("solve_n2: both candidates cancel, Bob picks the better") {
  const auto w = terms({1.0, 1.0});
  const auto b = terms({ComplexScalar{0.3, 1.2}, ComplexScalar{-0.8, 0.1}});
  const ComplexScalar h = std::polar(std::sqrt(2.0), kPi / 4);
  const auto sol = solve_n2(w, h, {b, ComplexScalar{0.5, -0.2}, 2.0, 1.0, 0.5});
  CHECK(sol.candidates.residual_a <= 1e-20);
  CHECK(sol.candidates.residual_b <= 1e-20);
  CHECK(sol.result.bob_snr == std::max(sol.candidates.bob_snr_a, sol.candidates.bob_snr_b));
  CHECK(sol.result.willie_snr <= 1e-20);
  // Bob SNR re-evaluated independently.
  const double ref = oracle::phased_power(fixture::zs(b), fixture::to_vec(sol.result.phases), {0.5, -0.2}) * 2.0 / 0.5;
  CHECK(sol.result.bob_snr == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("solve_n2: infeasible direct path") {
  const auto w = real_terms({3.0, 1.0});
  const auto b = terms({1.0, 1.0});
  CHECK(solve_n2(w, 6.0, unit_bob(b)).result.status == SolveStatus::Infeasible);
  CHECK(solve_n2(w, 1.5, unit_bob(b)).result.status == SolveStatus::Infeasible);
  CHECK(solve_n2(w, 2.0, unit_bob(b)).result.status == SolveStatus::Converged);
  CHECK_THROWS_AS(solve_n2(real_terms({1.0, 1.0, 1.0}), 1.0, unit_bob(terms({1.0, 1.0, 1.0}))),
                  std::invalid_argument);
}

TEST_CASE("solve_n2: a dead Willie element frees it for Bob") {
  const auto w = real_terms({0.0, 2.0});
  const auto b = terms({ComplexScalar{0.0, 1.0}, ComplexScalar{1.0, 1.0}});
  const ComplexScalar h{0.0, 2.0};
  const auto sol = solve_n2(w, h, {b, ComplexScalar{0.5, 0.0}, 1.0, 1.0, 1.0});
  CHECK(sol.result.status == SolveStatus::Converged);
  CHECK(sol.result.residual_power <= 1e-24);
  // Bob gets the coherent sum of the fixed part and the free element.
  const auto fixed = b[1].z * unit_phasor(sol.result.phases[1]) + 0.5;
  CHECK(sol.result.bob_snr == doctest::Approx(std::pow(std::abs(fixed) + b[0].r, 2)).epsilon(1e-12));
  CHECK(solve_n2(w, 1.0, unit_bob(b)).result.status == SolveStatus::Infeasible);
  CHECK(solve_n2(real_terms({0.0, 0.0}), 0.0, unit_bob(b)).result.status == SolveStatus::Converged);
  CHECK(solve_n2(real_terms({0.0, 0.0}), 0.1, unit_bob(b)).result.status == SolveStatus::Infeasible);
}

TEST_CASE("solve_n2 on sampled instances against the grid oracle") {
  const auto instances = fixture::feasible_instances(2, 40, 4242);
  int compared = 0;
  for (const auto& inst : instances) {
    const auto sol = solve_n2(inst.willie, inst.h_aw, inst.bob_context());
    const double scale = fixture::scale_of(inst.willie, inst.h_aw);
    REQUIRE(sol.result.status == SolveStatus::Converged);
    CHECK(sol.candidates.residual_a <= 1e-12 * scale * scale);
    CHECK(sol.candidates.residual_b <= 1e-12 * scale * scale);
    CHECK(sol.result.bob_snr >= std::min(sol.candidates.bob_snr_a, sol.candidates.bob_snr_b));
    CHECK(sol.result.bob_snr == std::max(sol.candidates.bob_snr_a, sol.candidates.bob_snr_b));

    const auto cmp = fixture::compare_with_grid(inst, sol, 1024);
    CHECK(cmp.admitted_any);
    if (!cmp.conditioned) continue;
    ++compared;
    CHECK(std::abs(cmp.grid_best - cmp.selected) <= cmp.slack);
  }
  CHECK(compared >= 30);
}
