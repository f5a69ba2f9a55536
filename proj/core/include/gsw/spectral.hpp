#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/fock.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/pmap.hpp"

namespace gsw::spectral {

using algebra::ClassicalPolynomial;
using algebra::OperatorPolynomial;
using fock::FockBasis;
using fock::FockMatrix;
using fock::FockVector;

/// N((h - E)^2): the square is expanded classically, then normal-producted.
/// Throws PreconditionError unless h is real-valued.
OperatorPolynomial build_M(const ClassicalPolynomial& h, double energy);

/// N(h^2) - N(h) N(h).
OperatorPolynomial delta_operator(const ClassicalPolynomial& h);

/// build_M(h, E) - (H_n - E)(H_n - E); equals delta_operator(h) for every E.
OperatorPolynomial compare_with_square(const ClassicalPolynomial& h, double energy);

/// Eigenvectors with |lambda| <= tol, as columns.
fock::Matrix zero_eigenspace(const fock::EigenDecomposition& eig, double tol);
fock::Matrix zero_eigenspace(const FockMatrix& m, double tol);
std::vector<FockVector> zero_eigenvectors(const FockMatrix& m, double tol);

/// 1e-8 * (1 + spectral radius).
double default_zero_tolerance(std::span<const double> eigenvalues);

struct SpectralReport {
  double energy = 0.0;
  std::vector<double> eigenvalues;
  std::size_t zero_space_dimension = 0;
  double zero_tolerance = 0.0;
  double min_eigenvalue = 0.0;
  /// Columns spanning the zero eigenspace.
  fock::Matrix zero_vectors;
  std::optional<double> ensemble_residual;
  /// Trace norm of (I - P0) rho (I - P0).
  std::optional<double> ensemble_projection_deficit;
};

inline constexpr double kDefiniteEnergyTolerance = 1e-9;

/// Eigen-analysis of M(E) on `basis`, plus ensemble diagnostics when given.
/// Throws PreconditionError naming the first member with |h(s) - E| > 1e-9.
SpectralReport analyze(const ClassicalPolynomial& h, double energy, const pmap::WeightedEnsemble* ensemble,
                       const FockBasis& basis, std::optional<double> tol = std::nullopt);

/// Definite-energy ensemble on the level set h = E, equal weights.
/// For h = sum_j w_j conj(al_j) al_j with w_j > 0 the actions are drawn
/// uniformly from the simplex sum w_j I_j = E and the phases uniformly;
/// otherwise random starts are Newton-projected along grad h until
/// |h - E| <= 1e-10. Throws PreconditionError if the level set is not reached.
pmap::WeightedEnsemble level_set_ensemble(const ClassicalPolynomial& h, double energy, std::size_t count,
                                          std::uint64_t seed);

/// If h is sum_j w_j conj(al_j) al_j (no other terms), the weights w_j.
std::optional<std::vector<double>> free_frequencies(const ClassicalPolynomial& h);

/// Smallest Rayleigh quotient of m over the linear span of `states`, by
/// orthonormalizing their Gram matrix (directions with Gram eigenvalue below
/// 1e-12 of the largest are dropped).
double span_minimum(const FockMatrix& m, std::span<const FockVector> states);

/// Smallest <psi|m|psi> over the given states; the minimum of Tr(m rho) over
/// their convex hull of density matrices.
double mixture_minimum(const FockMatrix& m, std::span<const FockVector> states);

}  // namespace gsw::spectral
