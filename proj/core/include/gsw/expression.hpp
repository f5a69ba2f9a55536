#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/ordering.hpp"
#include "gsw/phase_polynomial.hpp"

namespace gsw::algebra {

/// Named numeric parameters usable in expressions, e.g. {"E", 1.5}.
using ParameterMap = std::map<std::string, Scalar, std::less<>>;

using ParsedExpression = std::variant<OperatorPolynomial, ClassicalPolynomial, PhasePolynomial>;

// Grammar (whitespace-insensitive):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number | number 'i' | 'i' | symbol | parameter
//            | 'conj' '(' expr ')' | '(' expr ')'
//
// Symbols carry a mode label J from `mode_names`: aJ (annihilation), adJ
// (creation), alJ (classical alpha_J), phiJ / qJ (coordinate), piJ / pJ
// (momentum). Ladder, alpha and phase-space symbols cannot be mixed.

/// Parses into the algebra implied by the symbols present. Operator
/// expressions are normal-ordered on ingestion; scalar-only text yields a
/// constant ClassicalPolynomial.
ParsedExpression parse_expression(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters = {});

OperatorPolynomial parse_operator(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters = {});
/// Keeps the written factor order (no commutators), for the normal product.
RawOperatorSum parse_raw_operator(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters = {});
ClassicalPolynomial parse_classical(std::string_view text, std::span<const std::string> mode_names,
                                    const ParameterMap& parameters = {});
PhasePolynomial parse_phase(std::string_view text, std::span<const std::string> mode_names,
                            const ParameterMap& parameters = {});

/// 1 + the largest numeric mode label appearing in a symbol, or 1 if none.
std::size_t infer_mode_count(std::string_view text);

}  // namespace gsw::algebra
