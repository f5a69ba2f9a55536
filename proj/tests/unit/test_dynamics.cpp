#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "gsw/error.hpp"
#include "gsw/dynamics.hpp"
#include "gsw/expression.hpp"
#include "physics.hpp"

using namespace gsw;
using namespace gsw::dynamics;

namespace {

PhasePolynomial phase(const std::string& text, std::size_t dof = 1) {
  const auto n = algebra::default_mode_names(dof);
  return algebra::parse_phase(text, n);
}

double energy(const PhasePolynomial& h, const PhasePoint& x) { return h.evaluate(x.q, x.p); }

}  // namespace

TEST(Divergence, harmonic_oscillator_is_zero) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator(2.0, 1.5));
  EXPECT_TRUE(symbolic_divergence(sys)->is_zero());
  EXPECT_EQ(divergence(sys, {{0.3}, {-0.2}}), 0.0);
}

TEST(Divergence, damped_oscillator_is_minus_gamma) {
  const auto sys = damped_oscillator(1.0, 1.0, 0.1);
  EXPECT_NEAR(divergence(sys, {{0.5}, {0.7}}), -0.1, 1e-12);
  EXPECT_FALSE(symbolic_divergence(sys)->is_zero());
}

TEST(Divergence, quartic_oscillator_symbolic_and_finite_difference) {
  const auto h = quartic_oscillator(0.3);
  const auto sys = OdeSystem::hamiltonian(h);
  EXPECT_TRUE(symbolic_divergence(sys)->is_zero());
  const auto callable = OdeSystem::callable_field(1, [&](auto q, auto p, auto dq, auto dp) { sys.velocity(q, p, dq, dp); });
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) EXPECT_LE(std::abs(divergence(callable, {{u(rng)}, {u(rng)}})), 1e-7);
}

TEST(Divergence, non_finite_field_is_rejected) {
  const auto sys = OdeSystem::callable_field(1, [](auto, auto, auto dq, auto dp) {
    dq[0] = std::numeric_limits<double>::quiet_NaN();
    dp[0] = 0.0;
  });
  EXPECT_THROW(divergence(sys, {{0.0}, {0.0}}), NumericalError);
}

TEST(Incompressibility, polynomial_hamiltonian_is_incompressible) {
  const std::vector<PhasePoint> pts{{{0.1}, {0.2}}};
  const auto r = is_statistically_incompressible(OdeSystem::hamiltonian(phase("q0^3*p0 + p0^4 + q0^2")), pts);
  EXPECT_TRUE(r.incompressible);
  EXPECT_TRUE(r.symbolic);
  EXPECT_EQ(r.max_abs_divergence, 0.0);
}

TEST(Incompressibility, damped_oscillator_is_compressible) {
  const std::vector<PhasePoint> pts{{{0.1}, {0.2}}, {{-1.0}, {3.0}}};
  const auto r = is_statistically_incompressible(damped_oscillator(1.0, 1.0, 0.1), pts);
  EXPECT_FALSE(r.incompressible);
  EXPECT_NEAR(r.max_abs_divergence, 0.1, 1e-12);
}

TEST(Incompressibility, callable_rotation_is_incompressible) {
  const std::vector<PhasePoint> pts{{{0.1}, {0.2}}, {{1.0}, {-1.0}}};
  const auto sys = OdeSystem::callable_field(1, [](auto q, auto p, auto dq, auto dp) {
    dq[0] = p[0];
    dp[0] = -q[0];
  });
  const auto r = is_statistically_incompressible(sys, pts);
  EXPECT_TRUE(r.incompressible);
  EXPECT_FALSE(r.symbolic);
}

TEST(Evolve, harmonic_period_returns_to_start) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator());
  const auto x = evolve_point(sys, {{1.0}, {0.0}}, 2.0 * std::numbers::pi, 1e-3);
  EXPECT_NEAR(x.q[0], 1.0, 1e-4);
  EXPECT_NEAR(x.p[0], 0.0, 1e-4);
}

TEST(Evolve, matches_exact_rotation) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator());
  const auto x = evolve_point(sys, {{0.3}, {-0.8}}, 1.3, 1e-4);
  const auto [q, p] = oracle::harmonic_flow(0.3, -0.8, 1.3);
  EXPECT_NEAR(x.q[0], q, 1e-7);
  EXPECT_NEAR(x.p[0], p, 1e-7);
}

TEST(Evolve, zero_horizon_is_identity) {
  const auto sys = OdeSystem::hamiltonian(quartic_oscillator(0.5));
  FlowEnsemble e{{{{0.1}, {0.2}}, {{-0.3}, {1.0}}}, {}, 4};
  const auto out = evolve(sys, e, 0.0, 1e-2);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(out.samples[i].q, e.samples[i].q);
    EXPECT_EQ(out.samples[i].p, e.samples[i].p);
  }
}

TEST(Evolve, quartic_energy_drift_is_small) {
  const auto h = quartic_oscillator(0.25);
  const auto sys = OdeSystem::hamiltonian(h);
  const PhasePoint x0{{1.0}, {0.5}};
  const auto x = evolve_point(sys, x0, 10.0, 1e-3);
  EXPECT_LE(std::abs(energy(h, x) - energy(h, x0)), 1e-5);
}

TEST(Evolve, non_separable_hamiltonian_conserves_energy) {
  const auto h = phase("0.5*(p0^2 + q0^2) + 0.1*q0^2*p0^2");
  const auto sys = OdeSystem::hamiltonian(h);
  EXPECT_FALSE(h.is_separable());
  const PhasePoint x0{{0.8}, {0.3}};
  const auto x = evolve_point(sys, x0, 10.0, 1e-2);
  EXPECT_LE(std::abs(energy(h, x) - energy(h, x0)), 1e-4);
}

TEST(Evolve, damped_oscillator_loses_energy) {
  const auto sys = damped_oscillator(1.0, 1.0, 0.2);
  const auto x = evolve_point(sys, {{1.0}, {0.0}}, 10.0, 1e-2);
  const double e = 0.5 * (x.q[0] * x.q[0] + x.p[0] * x.p[0]);
  EXPECT_LT(e, 0.5 * std::exp(-0.2 * 10.0) * 1.5);
}

TEST(Evolve, blow_up_is_detected) {
  const auto sys = OdeSystem::polynomial_field({phase("q0^3")}, {phase("0")});
  EXPECT_THROW(evolve_point(sys, {{2.0}, {0.0}}, 10.0, 1e-2), BlowUpError);
}

TEST(BoltzmannSample, harmonic_mean_energy_and_position) {
  const double k = 2.0;
  const auto h = harmonic_oscillator();
  const auto e = boltzmann_sample(OdeSystem::hamiltonian(h), k, 20000, 1);
  ASSERT_EQ(e.size(), 20000U);
  double sum_h = 0.0, sum_h2 = 0.0, sum_q = 0.0, sum_q2 = 0.0;
  for (const auto& s : e.samples) {
    const double hv = energy(h, s);
    const double q2 = s.q[0] * s.q[0];
    sum_h += hv;
    sum_h2 += hv * hv;
    sum_q += q2;
    sum_q2 += q2 * q2;
  }
  const double n = 20000.0;
  const double mh = sum_h / n;
  const double mq = sum_q / n;
  const double se_h = std::sqrt((sum_h2 / n - mh * mh) / (n - 1));
  const double se_q = std::sqrt((sum_q2 / n - mq * mq) / (n - 1));
  EXPECT_LE(std::abs(mh - oracle::harmonic_mean_energy(k)), 3 * se_h);
  EXPECT_LE(std::abs(mq - oracle::harmonic_mean_q2(k, 1.0, 1.0)), 3 * se_q);
}

TEST(BoltzmannSample, is_seed_deterministic) {
  const auto sys = OdeSystem::hamiltonian(quartic_oscillator(0.1));
  const auto a = boltzmann_sample(sys, 1.0, 64, 42);
  const auto b = boltzmann_sample(sys, 1.0, 64, 42);
  const auto c = boltzmann_sample(sys, 1.0, 64, 43);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(a.samples[i].q, b.samples[i].q);
    EXPECT_EQ(a.samples[i].p, b.samples[i].p);
  }
  EXPECT_NE(a.samples[0].q, c.samples[0].q);
  EXPECT_EQ(a.seed, 42U);
}

TEST(BoltzmannSample, nonpositive_inverse_temperature_is_rejected) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator());
  EXPECT_THROW(boltzmann_sample(sys, 0.0, 10, 1), PreconditionError);
  EXPECT_THROW(boltzmann_sample(sys, -1.0, 10, 1), PreconditionError);
}

TEST(BoltzmannSample, non_normalizable_hamiltonian_is_rejected) {
  EXPECT_THROW(boltzmann_sample(OdeSystem::hamiltonian(phase("0.5*p0^2 - 0.5*q0^2")), 1.0, 10, 1), PreconditionError);
  EXPECT_THROW(boltzmann_sample(OdeSystem::hamiltonian(phase("0.5*p0^2 + 0.5*q0^2 + q0^3")), 1.0, 10, 1),
               PreconditionError);
  EXPECT_THROW(boltzmann_sample(damped_oscillator(1.0, 1.0, 0.1), 1.0, 10, 1), PreconditionError);
}

TEST(NormalizabilityIssue, accepts_confining_quartic) {
  EXPECT_FALSE(normalizability_issue(quartic_oscillator(0.2)).has_value());
  EXPECT_FALSE(normalizability_issue(phase("0.5*(p0^2 + q0^2) + 0.1*q0^3 + q0^4 + p0^4")).has_value());
  EXPECT_TRUE(normalizability_issue(phase("0.5*(p0^2 + q0^2) + 0.1*q0^3 + q0^4")).has_value());
  EXPECT_TRUE(normalizability_issue(phase("0.5*(p0^2 + q0^2) - q0^4")).has_value());
  EXPECT_TRUE(normalizability_issue(phase("0.5*(p0^2 + q0^2) + q0^6")).has_value());
  EXPECT_TRUE(normalizability_issue(phase("0.5*(p0^2 + q0^2) + q0*p0^2 + q0^4")).has_value());
}

TEST(InvarianceTest, boltzmann_ensemble_shows_no_drift) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator());
  const auto e = boltzmann_sample(sys, 2.0, 4000, 3);
  const auto r = invariance_test(sys, e, 5.0);
  EXPECT_TRUE(r.invariant);
  EXPECT_EQ(r.drifts.size(), 3U);
  EXPECT_NE(r.note.find("ergodicity"), std::string::npos);
}

TEST(InvarianceTest, point_ensemble_drifts) {
  const auto sys = OdeSystem::hamiltonian(harmonic_oscillator());
  FlowEnsemble e{{{{1.0}, {0.0}}}, {}, 0};
  const auto r = invariance_test(sys, e, std::numbers::pi / 2.0);
  EXPECT_FALSE(r.invariant);
  bool q_flagged = false;
  for (const auto& d : r.drifts) {
    if (d.name == "q0^2") q_flagged = d.significant;
  }
  EXPECT_TRUE(q_flagged);
}

TEST(InvarianceTest, zero_horizon_has_zero_drift) {
  const auto sys = OdeSystem::hamiltonian(quartic_oscillator(0.1));
  const auto e = boltzmann_sample(sys, 1.0, 200, 5);
  const auto r = invariance_test(sys, e, 0.0);
  EXPECT_TRUE(r.invariant);
  for (const auto& d : r.drifts) EXPECT_EQ(d.drift, 0.0);
}

TEST(DualOperator, order_zero_is_identity) {
  const auto n = algebra::default_mode_names(1);
  EXPECT_EQ(dual_operator(0.5, algebra::parse_classical("conj(al0)*al0", n), 0),
            algebra::OperatorPolynomial::identity(1));
}

TEST(DualOperator, order_two_number_function) {
  const auto n = algebra::default_mode_names(1);
  const double k = 0.5;
  const auto f = dual_operator(k, algebra::parse_classical("conj(al0)*al0", n), 2);
  EXPECT_EQ(f, algebra::parse_operator("1 - 0.5*ad0*a0 + 0.125*ad0^2*a0^2", n));
  EXPECT_TRUE(f.is_hermitian());
}

TEST(FlowEnsembleIo, round_trip) {
  const auto e = boltzmann_sample(OdeSystem::hamiltonian(harmonic_oscillator()), 1.0, 16, 8);
  std::stringstream s;
  write_flow_ensemble(s, e);
  const auto back = read_flow_ensemble(s);
  ASSERT_EQ(back.size(), e.size());
  EXPECT_EQ(back.seed, 8U);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(back.samples[i].q, e.samples[i].q);
    EXPECT_EQ(back.samples[i].p, e.samples[i].p);
  }
}
