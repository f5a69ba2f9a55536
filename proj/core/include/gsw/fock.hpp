#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gsw/operator_polynomial.hpp"
#include "gsw/state.hpp"

namespace gsw::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated multi-mode occupation basis: mode j holds 0..cutoff_j quanta.
/// Flat index order puts mode 0 slowest-varying.
class FockBasis {
 public:
  static constexpr std::size_t kDefaultDimensionLimit = 20000;

  /// Throws DimensionError if any cutoff is 0 or the product exceeds `dimension_limit`.
  explicit FockBasis(std::vector<unsigned> cutoffs, std::size_t dimension_limit = kDefaultDimensionLimit);
  /// Same cutoff for every mode.
  static FockBasis uniform(std::size_t modes, unsigned cutoff,
                           std::size_t dimension_limit = kDefaultDimensionLimit);

  std::size_t number_of_modes() const noexcept { return cutoffs_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<unsigned>& cutoffs() const noexcept { return cutoffs_; }

  std::size_t index_of(std::span<const unsigned> occupations) const;
  std::vector<unsigned> occupations_of(std::size_t index) const;

  friend bool operator==(const FockBasis& a, const FockBasis& b) { return a.cutoffs_ == b.cutoffs_; }

 private:
  std::vector<unsigned> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

struct FockVector {
  FockBasis basis;
  Vector components;

  double norm() const { return components.norm(); }
};

struct FockMatrix {
  FockBasis basis;
  Matrix entries;
  bool hermitian = false;
};

/// Tolerance on max |M - M^dagger| for the Hermitian flag.
inline constexpr double kHermitianTolerance = 1e-10;

/// Matrix of a normal-ordered polynomial using a|n> = sqrt(n)|n-1> and
/// a^dagger|n> = sqrt(n+1)|n+1>; transitions that leave the cutoff are
/// dropped. Every kept element is the exact infinite-space matrix element.
FockMatrix build_matrix(const algebra::OperatorPolynomial& p, const FockBasis& basis);

/// Upper bound on the squared norm of the exact coherent state outside the
/// truncated box: 1 - prod_j (1 - T_j), T_j bounding the Poisson(|alpha_j|^2)
/// tail above cutoff_j.
double truncation_bound(const ClassicalState& s, const FockBasis& basis);
/// Same bound with every cutoff lowered by `margin` (floored at 0); used to
/// leave headroom for operators of degree `margin`.
double truncation_bound(const ClassicalState& s, const FockBasis& basis, unsigned margin);

/// Upper bound on P(N > cutoff) for N ~ Poisson(mean).
double poisson_tail_bound(double mean, unsigned cutoff);

/// Default truncation tolerance for coherent-state construction.
inline constexpr double kDefaultTruncationTolerance = 1e-10;

struct CoherentState {
  FockVector state;
  /// 1 - (norm of the truncated series)^2, before re-normalization.
  double normalization_deficit = 0.0;
  double truncation_bound = 0.0;
};

/// Tensor product of e^{-|alpha|^2/2} alpha^n / sqrt(n!) per mode, re-normalized
/// inside the truncated space. Throws TruncationError when
/// truncation_bound(s, basis) > tolerance.
CoherentState build_coherent_state(const ClassicalState& s, const FockBasis& basis,
                                   double tolerance = kDefaultTruncationTolerance);
FockVector coherent_state(const ClassicalState& s, const FockBasis& basis,
                          double tolerance = kDefaultTruncationTolerance);

/// Rank-1 projector v v^dagger. Throws PreconditionError unless |norm - 1| <= 1e-9.
FockMatrix density_of(const FockVector& v);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns
};

/// Dense Hermitian eigendecomposition. Throws PreconditionError unless the
/// Hermitian flag is set.
EigenDecomposition hermitian_eigen(const FockMatrix& m);

/// Tr(a b) without forming the product.
Complex trace_product(const FockMatrix& a, const FockMatrix& b);
/// <v| m |v>.
Complex expectation(const FockMatrix& m, const FockVector& v);
/// max |M - M^dagger| entry.
double hermitian_defect(const Matrix& m);

/// Per-mode cutoffs large enough that every state passes truncation_bound <=
/// tolerance with each cutoff reduced by `margin`.
FockBasis adequate_basis(std::span<const ClassicalState> states, unsigned margin,
                         double tolerance = kDefaultTruncationTolerance,
                         std::size_t dimension_limit = FockBasis::kDefaultDimensionLimit);

}  // namespace gsw::fock
