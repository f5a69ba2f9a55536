#include "gsw/fock_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gsw/error.hpp"

namespace gsw::fock {
namespace {

std::string header(const char* tag, const FockBasis& basis) {
  std::string cut;
  for (std::size_t j = 0; j < basis.cutoffs().size(); ++j) {
    if (j) cut += ',';
    cut += std::to_string(basis.cutoffs()[j]);
  }
  return fmt::format("# {} dimension={} cutoffs={}", tag, basis.dimension(), cut);
}

struct Header {
  std::size_t dimension = 0;
  std::vector<unsigned> cutoffs;
  bool hermitian = false;
};

std::string field(const std::string& line, const std::string& key) {
  const auto at = line.find(key + "=");
  if (at == std::string::npos) throw ParseError("header lacks '" + key + "='", 0);
  const auto start = at + key.size() + 1;
  return line.substr(start, line.find(' ', start) - start);
}

Header read_header(std::istream& in, const std::string& tag) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# " + tag, 0) != 0) {
    throw ParseError("expected '# " + tag + "' header", 0);
  }
  Header h;
  h.dimension = std::stoul(field(line, "dimension"));
  std::stringstream cuts(field(line, "cutoffs"));
  for (std::string c; std::getline(cuts, c, ',');) h.cutoffs.push_back(static_cast<unsigned>(std::stoul(c)));
  if (line.find("hermitian=") != std::string::npos) h.hermitian = field(line, "hermitian") == "1";
  return h;
}

Complex read_entry(std::istream& in) {
  double re = 0.0;
  double im = 0.0;
  if (!(in >> re >> im)) throw ParseError("truncated entry list", 0);
  return {re, im};
}

}  // namespace

void write_matrix(std::ostream& out, const FockMatrix& m) {
  out << header("fock-matrix", m.basis) << " hermitian=" << (m.hermitian ? 1 : 0) << '\n';
  for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
      if (c) out << ' ';
      out << fmt::format("{:.17g} {:.17g}", m.entries(r, c).real(), m.entries(r, c).imag());
    }
    out << '\n';
  }
}

void write_vector(std::ostream& out, const FockVector& v) {
  out << header("fock-vector", v.basis) << '\n';
  for (Eigen::Index i = 0; i < v.components.size(); ++i) {
    out << fmt::format("{:.17g} {:.17g}\n", v.components(i).real(), v.components(i).imag());
  }
}

FockMatrix read_matrix(std::istream& in) {
  const auto h = read_header(in, "fock-matrix");
  FockBasis basis(h.cutoffs);
  if (basis.dimension() != h.dimension) throw ParseError("dimension does not match cutoffs", 0);
  const auto n = static_cast<Eigen::Index>(h.dimension);
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = read_entry(in);
  return FockMatrix{std::move(basis), std::move(m), h.hermitian};
}

FockVector read_vector(std::istream& in) {
  const auto h = read_header(in, "fock-vector");
  FockBasis basis(h.cutoffs);
  if (basis.dimension() != h.dimension) throw ParseError("dimension does not match cutoffs", 0);
  Vector v(static_cast<Eigen::Index>(h.dimension));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = read_entry(in);
  return FockVector{std::move(basis), std::move(v)};
}

}  // namespace gsw::fock
