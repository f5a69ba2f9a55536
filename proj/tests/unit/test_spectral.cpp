#include <gtest/gtest.h>

#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "gsw/spectral.hpp"
#include "ladder.hpp"

using namespace gsw;
using namespace gsw::spectral;
using fock::FockBasis;

namespace {

ClassicalPolynomial cl(const std::string& text, std::size_t modes = 1) {
  const auto n = algebra::default_mode_names(modes);
  return algebra::parse_classical(text, n);
}

OperatorPolynomial op(const std::string& text, std::size_t modes = 1) {
  const auto n = algebra::default_mode_names(modes);
  return algebra::parse_operator(text, n);
}

const ClassicalPolynomial kNumber = cl("conj(al0)*al0");

}  // namespace

TEST(BuildM, zero_energy_is_normal_square) { EXPECT_EQ(build_M(kNumber, 0.0), op("ad0^2*a0^2")); }

TEST(BuildM, unit_energy_diagonal) {
  const auto m = build_M(kNumber, 1.0);
  EXPECT_EQ(m, op("ad0^2*a0^2 - 2*ad0*a0 + 1"));
  const auto dense = oracle::polynomial_matrix(m, {10});
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(dense(n, n).real(), (n - 1.0) * (n - 1.0) - n, 1e-12);
}

TEST(BuildM, two_mode_weighted_number) {
  const auto h = cl("conj(al0)*al0 + 2*conj(al1)*al1", 2);
  const auto expected =
      op("ad0^2*a0^2 + 4*ad0*ad1*a0*a1 + 4*ad1^2*a1^2 - 4*ad0*a0 - 8*ad1*a1 + 4", 2);
  const auto m = build_M(h, 2.0);
  EXPECT_EQ(m, expected);
  const auto dense = oracle::polynomial_matrix(m, {4, 4});
  const auto got = fock::build_matrix(m, FockBasis({4, 4}));
  EXPECT_LE((dense - got.entries).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildM, result_is_hermitian) {
  const auto h = cl("conj(al0)*al0 + 0.5*(al0^2 + conj(al0)^2) + conj(al0)^2*al0^2");
  EXPECT_TRUE(build_M(h, 0.7).is_hermitian());
}

TEST(BuildM, non_real_h_is_rejected) { EXPECT_THROW(build_M(cl("al0"), 1.0), PreconditionError); }

TEST(DeltaOperator, number_function) {
  EXPECT_EQ(delta_operator(kNumber), -op("ad0*a0"));
  const auto n = oracle::polynomial_matrix(op("ad0*a0"), {8});
  const auto n2 = oracle::polynomial_matrix(algebra::normal_product(cl("conj(al0)^2*al0^2")), {8});
  EXPECT_LE((n2 - n * n - oracle::polynomial_matrix(delta_operator(kNumber), {8})).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DeltaOperator, constant_gives_zero) { EXPECT_TRUE(delta_operator(cl("3")).is_zero()); }

TEST(DeltaOperator, linear_quadrature_gives_minus_one) {
  EXPECT_EQ(delta_operator(cl("al0 + conj(al0)")), -OperatorPolynomial::identity(1));
}

TEST(CompareWithSquare, number_function_any_energy) {
  EXPECT_EQ(compare_with_square(kNumber, 0.0), -op("ad0*a0"));
  EXPECT_EQ(compare_with_square(kNumber, 7.0), compare_with_square(kNumber, 0.0));
  EXPECT_EQ(compare_with_square(kNumber, 2.5), -op("ad0*a0"));
}

TEST(CompareWithSquare, constant_gives_zero) { EXPECT_TRUE(compare_with_square(cl("2"), 1.0).is_zero()); }

TEST(ZeroEigenspace, diagonal_example) {
  fock::Matrix m = fock::Matrix::Zero(3, 3);
  m(0, 0) = 1;
  m(1, 1) = -1;
  const FockMatrix fm{FockBasis::uniform(1, 2), m, true};
  const auto z = zero_eigenspace(fm, 1e-9);
  ASSERT_EQ(z.cols(), 1);
  EXPECT_NEAR(std::abs(z(2, 0)), 1.0, 1e-15);
}

TEST(ZeroEigenspace, energy_two_picks_fock_one_and_four) {
  const auto m = fock::build_matrix(build_M(kNumber, 2.0), FockBasis::uniform(1, 12));
  const auto z = zero_eigenspace(m, 1e-8);
  ASSERT_EQ(z.cols(), 2);
  const fock::Matrix projector = z * z.adjoint();
  for (int n = 0; n <= 12; ++n) EXPECT_NEAR(projector(n, n).real(), (n == 1 || n == 4) ? 1.0 : 0.0, 1e-12);
}

TEST(ZeroEigenspace, generic_energy_has_none) {
  const auto m = fock::build_matrix(build_M(kNumber, 1.5), FockBasis::uniform(1, 12));
  EXPECT_EQ(zero_eigenspace(m, 1e-6).cols(), 0);
  double smallest = 1e300;
  for (int n = 0; n <= 12; ++n) smallest = std::min(smallest, std::abs((n - 1.5) * (n - 1.5) - n));
  EXPECT_GT(smallest, 1e-6);
}

TEST(ZeroEigenspace, non_hermitian_is_rejected) {
  const auto m = fock::build_matrix(OperatorPolynomial::annihilation(1, 0), FockBasis::uniform(1, 3));
  EXPECT_THROW(zero_eigenspace(m, 1e-8), PreconditionError);
}

TEST(Analyze, phase_mix_residual_vanishes) {
  const auto e = pmap::phase_ensemble(64, 1.0);
  const auto r = analyze(kNumber, 1.0, &e, FockBasis::uniform(1, 24));
  ASSERT_TRUE(r.ensemble_residual.has_value());
  EXPECT_LE(std::abs(*r.ensemble_residual), 1e-8);
  ASSERT_TRUE(r.ensemble_projection_deficit.has_value());
  EXPECT_GT(*r.ensemble_projection_deficit, 0.5);
}

TEST(Analyze, minimum_eigenvalue_is_negative_for_unit_energy) {
  const auto r = analyze(kNumber, 1.0, nullptr, FockBasis::uniform(1, 12));
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-12);
  EXPECT_FALSE(r.ensemble_residual.has_value());
  EXPECT_EQ(r.zero_space_dimension, 0U);
}

TEST(Analyze, vacuum_is_in_zero_space_at_zero_energy) {
  const auto e = pmap::point_ensemble(ClassicalState{{0.0}});
  const auto r = analyze(kNumber, 0.0, &e, FockBasis::uniform(1, 8));
  EXPECT_EQ(*r.ensemble_residual, 0.0);
  EXPECT_NEAR(*r.ensemble_projection_deficit, 0.0, 1e-12);
  EXPECT_GE(r.zero_space_dimension, 1U);
}

TEST(Analyze, off_shell_member_is_reported) {
  const auto e = pmap::WeightedEnsemble::uniform({ClassicalState{{1.0}}, ClassicalState{{1.2}}});
  try {
    analyze(kNumber, 1.0, &e, FockBasis::uniform(1, 20));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("member 1"), std::string::npos) << err.what();
  }
}

TEST(Analyze, negative_energy_is_rejected) {
  EXPECT_THROW(analyze(kNumber, -1.0, nullptr, FockBasis::uniform(1, 8)), PreconditionError);
}

TEST(LevelSetEnsemble, free_case_lies_on_level_set) {
  const auto h = cl("conj(al0)*al0 + 2*conj(al1)*al1", 2);
  const auto e = level_set_ensemble(h, 1.5, 30, 11);
  ASSERT_EQ(e.size(), 30U);
  for (const auto& m : e.members) EXPECT_NEAR(h.evaluate(m.state.amplitudes).real(), 1.5, 1e-12);
}

TEST(LevelSetEnsemble, interacting_case_lies_on_level_set) {
  const auto h = cl("conj(al0)*al0 + 0.1*(al0 + conj(al0))^4");
  const auto e = level_set_ensemble(h, 0.8, 20, 5);
  for (const auto& m : e.members) EXPECT_NEAR(h.evaluate(m.state.amplitudes).real(), 0.8, 1e-10);
}

TEST(LevelSetEnsemble, is_seed_deterministic) {
  const auto a = level_set_ensemble(kNumber, 1.0, 5, 3);
  const auto b = level_set_ensemble(kNumber, 1.0, 5, 3);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a.members[i].state.amplitudes, b.members[i].state.amplitudes);
}

TEST(FreeFrequencies, detects_weighted_number_sum) {
  EXPECT_EQ(*free_frequencies(cl("conj(al0)*al0 + 2*conj(al1)*al1", 2)), (std::vector<double>{1.0, 2.0}));
  EXPECT_FALSE(free_frequencies(cl("conj(al0)*al0 + al0 + conj(al0)")).has_value());
}

TEST(MixtureMinimum, nonnegative_over_energy_shell_coherent_states) {
  const FockBasis basis = FockBasis::uniform(1, 30);
  const auto m = fock::build_matrix(build_M(kNumber, 1.0), basis);
  std::vector<FockVector> states;
  for (const auto& member : pmap::phase_ensemble(12, 1.0).members) states.push_back(fock::coherent_state(member.state, basis));
  EXPECT_GE(mixture_minimum(m, states), -1e-9);
}

TEST(SpanMinimum, single_state_equals_its_expectation) {
  const FockBasis basis = FockBasis::uniform(1, 30);
  const auto m = fock::build_matrix(build_M(kNumber, 1.0), basis);
  const std::vector<FockVector> one{fock::coherent_state(ClassicalState{{0.6}}, basis)};
  EXPECT_NEAR(span_minimum(m, one), (0.36 - 1.0) * (0.36 - 1.0), 1e-9);
}
