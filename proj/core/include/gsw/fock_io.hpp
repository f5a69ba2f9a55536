#pragma once

#include <iosfwd>

#include "gsw/fock.hpp"

namespace gsw::fock {

// Text dump:
//
//   # fock-matrix dimension=16 cutoffs=3,3 hermitian=1
//   re im re im ...        (one line per row, row-major)
//
// Vectors use "# fock-vector dimension=N cutoffs=..." and one "re im" per line.

void write_matrix(std::ostream& out, const FockMatrix& m);
void write_vector(std::ostream& out, const FockVector& v);

/// Throws ParseError on malformed headers or entry counts.
FockMatrix read_matrix(std::istream& in);
FockVector read_vector(std::istream& in);

}  // namespace gsw::fock
