#include <gtest/gtest.h>

#include <sstream>

#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "gsw/fock.hpp"
#include "gsw/fock_io.hpp"

using namespace gsw;
using namespace gsw::fock;

TEST(FockIo, matrix_round_trip_is_bit_exact) {
  const auto n = algebra::default_mode_names(2);
  const auto m = build_matrix(algebra::parse_operator("ad0*a1 + 0.3i*a0^2 + 1", n), FockBasis({2, 3}));
  std::stringstream s;
  write_matrix(s, m);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "# fock-matrix dimension=12 cutoffs=2,3 hermitian=0");
  const auto back = read_matrix(s);
  EXPECT_EQ(back.basis, m.basis);
  EXPECT_EQ(back.hermitian, m.hermitian);
  EXPECT_EQ(back.entries, m.entries);
}

TEST(FockIo, vector_round_trip_is_bit_exact) {
  const auto v = coherent_state(ClassicalState{{std::complex<double>(0.3, -0.2)}}, FockBasis::uniform(1, 12));
  std::stringstream s;
  write_vector(s, v);
  const auto back = read_vector(s);
  EXPECT_EQ(back.basis, v.basis);
  EXPECT_EQ(back.components, v.components);
}

TEST(FockIo, wrong_entry_count_is_a_parse_error) {
  std::stringstream s("# fock-matrix dimension=2 cutoffs=1 hermitian=1\n1 0 0 0\n");
  EXPECT_THROW(read_matrix(s), ParseError);
}

TEST(FockIo, missing_header_is_a_parse_error) {
  std::stringstream s("1 0\n0 0\n");
  EXPECT_THROW(read_vector(s), ParseError);
}
