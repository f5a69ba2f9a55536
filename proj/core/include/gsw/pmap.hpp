#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/fock.hpp"
#include "gsw/state.hpp"

namespace gsw::pmap {

using fock::FockBasis;
using fock::FockMatrix;

/// Finite mixture of classical states.
struct WeightedEnsemble {
  struct Member {
    double weight = 0.0;
    ClassicalState state;
  };
  std::vector<Member> members;

  static constexpr double kWeightTolerance = 1e-12;

  /// Equal weights.
  static WeightedEnsemble uniform(std::vector<ClassicalState> states);

  std::size_t size() const noexcept { return members.size(); }
  std::size_t number_of_modes() const;
  /// Throws PreconditionError on an empty ensemble, negative or non-finite
  /// weights, weights not summing to 1, or inconsistent mode counts.
  void validate() const;
  std::vector<ClassicalState> states() const;
};

WeightedEnsemble point_ensemble(ClassicalState s);

/// Uniform phase quadrature: K points alpha = radius * e^{2 pi i k / K}, one mode.
WeightedEnsemble phase_ensemble(unsigned points, double radius);
/// Product phase grid over several modes with per-mode radii (K^n members).
WeightedEnsemble phase_ensemble(unsigned points, std::span<const double> radii);

// Record format: "weight re0 im0 re1 im1 ...", '#' starts a comment line.
void write_ensemble(std::ostream& out, const WeightedEnsemble& e);
/// Throws ParseError (position = line number - 1).
WeightedEnsemble read_ensemble(std::istream& in);

FockMatrix rho_of_state(const ClassicalState& s, const FockBasis& basis,
                        double tolerance = fock::kDefaultTruncationTolerance);
FockMatrix rho_of_ensemble(const WeightedEnsemble& e, const FockBasis& basis,
                           double tolerance = fock::kDefaultTruncationTolerance);

struct TraceCheckReport {
  std::complex<double> classical_expectation;
  std::complex<double> quantum_trace;
  double residual = 0.0;
  /// Largest member truncation bound with cutoffs lowered by deg g.
  double truncation_bound_used = 0.0;
};

struct TraceCheckOptions {
  unsigned max_degree = 6;
  double truncation_tolerance = fock::kDefaultTruncationTolerance;
};

/// Both sides of Tr(rho G_n) = <g>: normal_product(g) as a matrix traced
/// against rho_of_ensemble(e), versus the weighted classical average of g.
/// Throws PreconditionError when deg g exceeds the maximum and TruncationError
/// when any member's tail beyond cutoff - deg g exceeds the tolerance.
TraceCheckReport trace_theorem_check(const algebra::ClassicalPolynomial& g, const WeightedEnsemble& e,
                                     const FockBasis& basis, const TraceCheckOptions& options = {});

/// Weighted classical average of g over e.
std::complex<double> classical_average(const algebra::ClassicalPolynomial& g, const WeightedEnsemble& e);

}  // namespace gsw::pmap
