#include "gsw/polynomial_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gsw/error.hpp"

namespace gsw::algebra {
namespace {

void write_terms(std::ostream& out, const char* tag, std::size_t modes,
                 const std::map<MonomialKey, Scalar>& terms) {
  out << "# " << tag << " modes=" << modes << '\n';
  for (const auto& [key, c] : terms) {
    out << fmt::format("{:.17g} {:.17g}", c.real(), c.imag());
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j].raised == 0 && key[j].lowered == 0) continue;
      out << ' ' << j << ' ' << key[j].raised << ' ' << key[j].lowered;
    }
    out << '\n';
  }
}

template <class P>
P read_terms(std::istream& in, const std::string& tag) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t modes = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto tag_at = line.find(tag);
      const auto modes_at = line.find("modes=");
      if (tag_at != std::string::npos && modes_at != std::string::npos) {
        modes = std::stoul(line.substr(modes_at + 6));
        break;
      }
      continue;
    }
    throw ParseError("missing '# " + tag + " modes=N' header", line_no - 1);
  }
  if (modes == 0) throw ParseError("missing '# " + tag + " modes=N' header", line_no);

  P p(modes);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream record(line);
    double re = 0.0;
    double im = 0.0;
    if (!(record >> re >> im)) throw ParseError("expected 'coeff_re coeff_im'", line_no - 1);
    MonomialKey key(modes);
    std::size_t mode = 0;
    while (record >> mode) {
      std::uint32_t raised = 0;
      std::uint32_t lowered = 0;
      if (!(record >> raised >> lowered) || mode >= modes) {
        throw ParseError("malformed mode triple", line_no - 1);
      }
      key[mode].raised += raised;
      key[mode].lowered += lowered;
    }
    if (!record.eof()) throw ParseError("trailing garbage in record", line_no - 1);
    p.add_term(key, Scalar::from_complex({re, im}));
  }
  return p;
}

}  // namespace

void write_polynomial(std::ostream& out, const OperatorPolynomial& p) {
  write_terms(out, "operator-polynomial", p.number_of_modes(), p.terms());
}

void write_polynomial(std::ostream& out, const ClassicalPolynomial& p) {
  write_terms(out, "classical-polynomial", p.number_of_modes(), p.terms());
}

OperatorPolynomial read_operator_polynomial(std::istream& in) {
  return read_terms<OperatorPolynomial>(in, "operator-polynomial");
}

ClassicalPolynomial read_classical_polynomial(std::istream& in) {
  return read_terms<ClassicalPolynomial>(in, "classical-polynomial");
}

}  // namespace gsw::algebra
