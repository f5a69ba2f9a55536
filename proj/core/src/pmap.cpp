#include "gsw/pmap.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "gsw/error.hpp"
#include "gsw/ordering.hpp"

namespace gsw::pmap {

WeightedEnsemble WeightedEnsemble::uniform(std::vector<ClassicalState> states) {
  WeightedEnsemble e;
  const double w = states.empty() ? 0.0 : 1.0 / static_cast<double>(states.size());
  for (auto& s : states) e.members.push_back({w, std::move(s)});
  return e;
}

std::size_t WeightedEnsemble::number_of_modes() const {
  return members.empty() ? 0 : members.front().state.number_of_modes();
}

void WeightedEnsemble::validate() const {
  if (members.empty()) throw PreconditionError("ensemble is empty");
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    if (!std::isfinite(m.weight) || m.weight < 0.0) {
      throw PreconditionError(fmt::format("ensemble member {} has invalid weight {}", i, m.weight));
    }
    if (m.state.number_of_modes() != number_of_modes() || m.state.number_of_modes() == 0) {
      throw PreconditionError(fmt::format("ensemble member {} has inconsistent mode count", i));
    }
    for (const auto& a : m.state.amplitudes) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw PreconditionError(fmt::format("ensemble member {} has a non-finite amplitude", i));
      }
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw PreconditionError(fmt::format("ensemble weights sum to {:.17g}, not 1", total));
  }
}

std::vector<ClassicalState> WeightedEnsemble::states() const {
  std::vector<ClassicalState> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.state);
  return out;
}

WeightedEnsemble point_ensemble(ClassicalState s) {
  WeightedEnsemble e;
  e.members.push_back({1.0, std::move(s)});
  return e;
}

WeightedEnsemble phase_ensemble(unsigned points, double radius) {
  const double r[] = {radius};
  return phase_ensemble(points, r);
}

WeightedEnsemble phase_ensemble(unsigned points, std::span<const double> radii) {
  if (points == 0) throw PreconditionError("phase ensemble needs at least one point");
  if (radii.empty()) throw PreconditionError("phase ensemble needs at least one mode");
  std::size_t count = 1;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    count *= points;
    if (count > 1'000'000) throw PreconditionError("phase grid too large");
  }
  std::vector<ClassicalState> states;
  states.reserve(count);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::vector<std::complex<double>> a(radii.size());
    std::size_t rest = flat;
    for (std::size_t j = radii.size(); j-- > 0;) {
      const auto k = static_cast<double>(rest % points);
      rest /= points;
      a[j] = std::polar(radii[j], 2.0 * std::numbers::pi * k / points);
    }
    states.emplace_back(std::move(a));
  }
  return WeightedEnsemble::uniform(std::move(states));
}

void write_ensemble(std::ostream& out, const WeightedEnsemble& e) {
  out << "# weight re0 im0 ... modes=" << e.number_of_modes() << '\n';
  for (const auto& m : e.members) {
    out << fmt::format("{:.17g}", m.weight);
    for (const auto& a : m.state.amplitudes) out << fmt::format(" {:.17g} {:.17g}", a.real(), a.imag());
    out << '\n';
  }
}

WeightedEnsemble read_ensemble(std::istream& in) {
  WeightedEnsemble e;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    std::istringstream record(line);
    double w = 0.0;
    if (!(record >> w)) throw ParseError("expected a weight", line_no - 1);
    std::vector<double> values;
    for (double x; record >> x;) values.push_back(x);
    if (!record.eof()) throw ParseError("non-numeric field", line_no - 1);
    if (values.empty() || values.size() % 2 != 0) throw ParseError("amplitudes must come in (re, im) pairs", line_no - 1);
    std::vector<std::complex<double>> a;
    for (std::size_t i = 0; i < values.size(); i += 2) a.emplace_back(values[i], values[i + 1]);
    e.members.push_back({w, ClassicalState(std::move(a))});
  }
  return e;
}

FockMatrix rho_of_state(const ClassicalState& s, const FockBasis& basis, double tolerance) {
  return fock::density_of(fock::coherent_state(s, basis, tolerance));
}

FockMatrix rho_of_ensemble(const WeightedEnsemble& e, const FockBasis& basis, double tolerance) {
  e.validate();
  const auto n = static_cast<Eigen::Index>(basis.dimension());
  fock::Matrix rho = fock::Matrix::Zero(n, n);
  for (const auto& m : e.members) {
    const auto v = fock::coherent_state(m.state, basis, tolerance);
    rho.noalias() += m.weight * (v.components * v.components.adjoint());
  }
  return FockMatrix{basis, std::move(rho), true};
}

std::complex<double> classical_average(const algebra::ClassicalPolynomial& g, const WeightedEnsemble& e) {
  std::complex<double> sum = 0.0;
  for (const auto& m : e.members) sum += m.weight * g.evaluate(m.state.view());
  return sum;
}

TraceCheckReport trace_theorem_check(const algebra::ClassicalPolynomial& g, const WeightedEnsemble& e,
                                     const FockBasis& basis, const TraceCheckOptions& options) {
  e.validate();
  if (g.number_of_modes() != basis.number_of_modes() || e.number_of_modes() != basis.number_of_modes()) {
    throw ShapeError("polynomial, ensemble and basis disagree on mode count");
  }
  const unsigned degree = g.degree();
  if (degree > options.max_degree) {
    throw PreconditionError(fmt::format("degree {} exceeds the configured maximum {}", degree, options.max_degree));
  }
  TraceCheckReport report;
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    const double bound = fock::truncation_bound(e.members[i].state, basis, degree);
    report.truncation_bound_used = std::max(report.truncation_bound_used, bound);
    if (bound > options.truncation_tolerance) {
      throw TruncationError(fmt::format("truncation inadequate for member {}: tail bound {:.3g} beyond cutoff - {} exceeds {:.3g}", i, bound,
                                        degree, options.truncation_tolerance));
    }
  }
  const auto gn = fock::build_matrix(algebra::normal_product(g), basis);
  const auto rho = rho_of_ensemble(e, basis, options.truncation_tolerance);
  report.quantum_trace = fock::trace_product(rho, gn);
  report.classical_expectation = classical_average(g, e);
  report.residual = std::abs(report.classical_expectation - report.quantum_trace);
  return report;
}

}  // namespace gsw::pmap
