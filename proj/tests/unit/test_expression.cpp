#include <gtest/gtest.h>

#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "ladder.hpp"

using namespace gsw;
using namespace gsw::algebra;

namespace {
const std::vector<std::string> kOneMode = default_mode_names(1);
const std::vector<std::string> kTwoModes = default_mode_names(2);
}  // namespace

TEST(ParseExpression, commutator_applied_on_ingestion) {
  const auto p = parse_operator("a0 * ad0", kOneMode);
  EXPECT_EQ(p.to_string(), "ad0*a0 + 1");
}

TEST(ParseExpression, classical_number_function) {
  const auto parsed = parse_expression("conj(al0)*al0", kOneMode);
  ASSERT_TRUE(std::holds_alternative<ClassicalPolynomial>(parsed));
  const auto& g = std::get<ClassicalPolynomial>(parsed);
  MonomialKey key(1);
  key[0] = {1, 1};
  EXPECT_EQ(g.size(), 1U);
  EXPECT_TRUE(Scalar::approx_equal(g.coefficient(key), Scalar(1)));
}

TEST(ParseExpression, double_commutator_matches_dense_product) {
  const auto p = parse_operator("a0^2 * ad0^2", kOneMode);
  EXPECT_EQ(p.to_string(), "ad0^2*a0^2 + 4*ad0*a0 + 2");
  const oracle::CMat a = oracle::lowering(14);
  const oracle::CMat word = (a * a * a.adjoint() * a.adjoint()).topLeftCorner(13, 13);
  EXPECT_LE((word - oracle::polynomial_matrix(p, {12})).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ParseExpression, complex_literals) {
  const auto p = parse_operator("2+3i", kOneMode);
  EXPECT_TRUE(Scalar::approx_equal(p.coefficient(MonomialKey(1)), Scalar::gaussian({2, 1}, {3, 1})));
  const auto q = parse_operator("i*ad0", kOneMode);
  MonomialKey key(1);
  key[0].raised = 1;
  EXPECT_TRUE(Scalar::approx_equal(q.coefficient(key), Scalar::imaginary_unit()));
}

TEST(ParseExpression, whitespace_is_ignored) {
  EXPECT_EQ(parse_operator("  ad0 *\ta0 +1 ", kOneMode), parse_operator("ad0*a0+1", kOneMode));
}

TEST(ParseExpression, parameters_substitute_values) {
  const ParameterMap params{{"E", Scalar(2)}};
  const auto g = parse_classical("conj(al0)*al0 - E", kOneMode, params);
  const std::complex<double> a[] = {{1.0, 0.0}};
  EXPECT_NEAR(g.evaluate(a).real(), -1.0, 1e-15);
}

TEST(ParseExpression, unary_minus_and_parentheses) {
  EXPECT_EQ(parse_operator("-(a0 - ad0)", kOneMode), parse_operator("ad0 - a0", kOneMode));
}

TEST(ParseExpression, two_modes) {
  const auto p = parse_operator("a0*ad1 + a1*ad0", kTwoModes);
  EXPECT_EQ(p.number_of_modes(), 2U);
  EXPECT_EQ(p, adjoint(p));
}

TEST(ParseExpression, syntax_error_reports_position) {
  try {
    parse_operator("ad0 * * a0", kOneMode);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6U);
  }
}

TEST(ParseExpression, unknown_symbol_is_rejected) {
  EXPECT_THROW(parse_operator("b0*a0", kOneMode), ParseError);
  EXPECT_THROW(parse_operator("a3", kOneMode), ParseError);
}

TEST(ParseExpression, mixing_ladder_and_classical_is_rejected) {
  EXPECT_THROW(parse_expression("a0*al0", kOneMode), ParseError);
}

TEST(ParseExpression, unbalanced_parenthesis_is_rejected) {
  EXPECT_THROW(parse_operator("(a0 + ad0", kOneMode), ParseError);
}

TEST(ParseExpression, negative_exponent_is_rejected) { EXPECT_THROW(parse_operator("a0^-1", kOneMode), ParseError); }

TEST(ParseExpression, empty_mode_names_is_a_precondition_error) {
  EXPECT_THROW(parse_operator("a0", std::vector<std::string>{}), PreconditionError);
}

TEST(ParseExpression, phase_space_symbols) {
  const auto h = parse_phase("0.5*pi0^2", kOneMode);
  EXPECT_EQ(h.degree(), 2U);
  const double q[] = {0.3};
  const double p[] = {2.0};
  EXPECT_NEAR(h.evaluate(q, p), 2.0, 1e-15);
}

TEST(ParseExpression, raw_parse_keeps_written_order) {
  const auto raw = parse_raw_operator("a0*ad0", kOneMode);
  ASSERT_EQ(raw.terms().size(), 1U);
  const auto& word = raw.terms().front().second;
  ASSERT_EQ(word.size(), 2U);
  EXPECT_FALSE(word[0].creation);
  EXPECT_TRUE(word[1].creation);
}

TEST(InferModeCount, uses_largest_label) {
  EXPECT_EQ(infer_mode_count("ad2*a0"), 3U);
  EXPECT_EQ(infer_mode_count("conj(al1)*al1"), 2U);
  EXPECT_EQ(infer_mode_count("3"), 1U);
}
