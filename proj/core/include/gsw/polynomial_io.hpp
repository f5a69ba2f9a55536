#pragma once

#include <iosfwd>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"

namespace gsw::algebra {

// Text serialization, one term per record:
//
//   # operator-polynomial modes=2
//   coeff_re coeff_im [mode raised lowered]...
//
// Only modes with a nonzero power are listed; a constant term is just the two
// coefficient fields. For classical polynomials the header reads
// "classical-polynomial" and (raised, lowered) are the conj(alpha) and alpha
// powers. Coefficients are written with 17 significant digits.

void write_polynomial(std::ostream& out, const OperatorPolynomial& p);
void write_polynomial(std::ostream& out, const ClassicalPolynomial& p);

/// Throws ParseError (position = line number - 1) on malformed records.
OperatorPolynomial read_operator_polynomial(std::istream& in);
ClassicalPolynomial read_classical_polynomial(std::istream& in);

}  // namespace gsw::algebra
