#include "gsw/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "gsw/error.hpp"

namespace gsw::fock {

FockBasis::FockBasis(std::vector<unsigned> cutoffs, std::size_t dimension_limit) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw ShapeError("Fock basis needs at least one mode");
  strides_.assign(cutoffs_.size(), 1);
  for (std::size_t j = cutoffs_.size(); j-- > 0;) {
    if (cutoffs_[j] < 1) throw DimensionError("Fock cutoffs must be >= 1");
    strides_[j] = dimension_;
    dimension_ *= cutoffs_[j] + 1;
    if (dimension_ > dimension_limit) {
      throw DimensionError("Fock dimension exceeds limit " + std::to_string(dimension_limit));
    }
  }
}

FockBasis FockBasis::uniform(std::size_t modes, unsigned cutoff, std::size_t dimension_limit) {
  return FockBasis(std::vector<unsigned>(modes, cutoff), dimension_limit);
}

std::size_t FockBasis::index_of(std::span<const unsigned> occupations) const {
  if (occupations.size() != cutoffs_.size()) throw ShapeError("occupation vector has wrong length");
  std::size_t index = 0;
  for (std::size_t j = 0; j < cutoffs_.size(); ++j) {
    if (occupations[j] > cutoffs_[j]) throw ShapeError("occupation exceeds cutoff");
    index += occupations[j] * strides_[j];
  }
  return index;
}

std::vector<unsigned> FockBasis::occupations_of(std::size_t index) const {
  std::vector<unsigned> occ(cutoffs_.size());
  for (std::size_t j = 0; j < cutoffs_.size(); ++j) {
    occ[j] = static_cast<unsigned>(index / strides_[j]);
    index %= strides_[j];
  }
  return occ;
}

FockMatrix build_matrix(const algebra::OperatorPolynomial& p, const FockBasis& basis) {
  if (p.number_of_modes() != basis.number_of_modes()) {
    throw ShapeError("operator has " + std::to_string(p.number_of_modes()) + " modes, basis has " +
                     std::to_string(basis.number_of_modes()));
  }
  const std::size_t dim = basis.dimension();
  const std::size_t modes = basis.number_of_modes();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<unsigned> target(modes);
  for (std::size_t col = 0; col < dim; ++col) {
    const auto occ = basis.occupations_of(col);
    for (const auto& [key, coeff] : p.terms()) {
      // Squared amplitude is an integer product; one sqrt keeps integer
      // matrix elements exact.
      double amplitude2 = 1.0;
      bool kept = true;
      for (std::size_t j = 0; j < modes && kept; ++j) {
        const unsigned n = occ[j];
        if (n < key[j].lowered) {
          kept = false;
          break;
        }
        const unsigned mid = n - key[j].lowered;
        const unsigned out = mid + key[j].raised;
        if (out > basis.cutoffs()[j]) {
          kept = false;
          break;
        }
        for (unsigned k = mid + 1; k <= n; ++k) amplitude2 *= k;
        for (unsigned k = mid + 1; k <= out; ++k) amplitude2 *= k;
        target[j] = out;
      }
      if (!kept) continue;
      const std::size_t row = basis.index_of(target);
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += coeff.value() * std::sqrt(amplitude2);
    }
  }
  const bool hermitian = hermitian_defect(m) <= kHermitianTolerance;
  return FockMatrix{basis, std::move(m), hermitian};
}

double poisson_tail_bound(double mean, unsigned cutoff) {
  if (!(mean > 0.0)) return 0.0;
  const double log_mean = std::log(mean);
  auto log_term = [&](double n) { return -mean + n * log_mean - std::lgamma(n + 1.0); };
  const double first = static_cast<double>(cutoff) + 1.0;
  const double last = std::max(first, std::ceil(2.0 * mean) + 20.0);
  double sum = 0.0;
  for (double n = first; n <= last; n += 1.0) sum += std::exp(log_term(n));
  // Beyond `last` successive terms shrink by at most r = mean / (last + 1) <= 1/2.
  const double r = mean / (last + 1.0);
  sum += std::exp(log_term(last)) * r / (1.0 - r);
  return std::min(1.0, sum * (1.0 + 1e-12));
}

double truncation_bound(const ClassicalState& s, const FockBasis& basis) { return truncation_bound(s, basis, 0); }

double truncation_bound(const ClassicalState& s, const FockBasis& basis, unsigned margin) {
  if (s.number_of_modes() != basis.number_of_modes()) throw ShapeError("state/basis mode-count mismatch");
  // 1 - prod(1 - T_j), kept accurate for tiny tails.
  double log_inside = 0.0;
  for (std::size_t j = 0; j < basis.number_of_modes(); ++j) {
    const unsigned c = basis.cutoffs()[j];
    const unsigned effective = c > margin ? c - margin : 0;
    log_inside += std::log1p(-poisson_tail_bound(std::norm(s.amplitudes[j]), effective));
  }
  return std::clamp(-std::expm1(log_inside), 0.0, 1.0);
}

CoherentState build_coherent_state(const ClassicalState& s, const FockBasis& basis, double tolerance) {
  const double bound = truncation_bound(s, basis);
  if (bound > tolerance) {
    throw TruncationError("truncation inadequate: tail bound " + std::to_string(bound) + " exceeds " +
                          std::to_string(tolerance));
  }
  Vector v = Vector::Ones(1);
  for (std::size_t j = 0; j < basis.number_of_modes(); ++j) {
    const Complex alpha = s.amplitudes[j];
    const unsigned cutoff = basis.cutoffs()[j];
    Vector mode(cutoff + 1);
    mode(0) = std::exp(-0.5 * std::norm(alpha));
    for (unsigned n = 1; n <= cutoff; ++n) mode(n) = mode(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    // Mode 0 slowest: kron(previous, mode).
    Vector next(v.size() * mode.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * mode.size(), mode.size()) = v(i) * mode;
    v = std::move(next);
  }
  const double norm2 = v.squaredNorm();
  v /= std::sqrt(norm2);
  return CoherentState{FockVector{basis, std::move(v)}, 1.0 - norm2, bound};
}

FockVector coherent_state(const ClassicalState& s, const FockBasis& basis, double tolerance) {
  return build_coherent_state(s, basis, tolerance).state;
}

FockMatrix density_of(const FockVector& v) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-9) throw PreconditionError("density_of needs a normalized vector (norm " + std::to_string(n) + ")");
  return FockMatrix{v.basis, v.components * v.components.adjoint(), true};
}

EigenDecomposition hermitian_eigen(const FockMatrix& m) {
  if (!m.hermitian) throw PreconditionError("hermitian_eigen needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.entries);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  return EigenDecomposition{std::vector<double>(values.data(), values.data() + values.size()), solver.eigenvectors()};
}

Complex trace_product(const FockMatrix& a, const FockMatrix& b) {
  if (!(a.basis == b.basis)) throw ShapeError("trace_product basis mismatch");
  return a.entries.cwiseProduct(b.entries.transpose()).sum();
}

Complex expectation(const FockMatrix& m, const FockVector& v) {
  if (!(m.basis == v.basis)) throw ShapeError("expectation basis mismatch");
  return v.components.dot(m.entries * v.components);
}

double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

FockBasis adequate_basis(std::span<const ClassicalState> states, unsigned margin, double tolerance,
                         std::size_t dimension_limit) {
  if (states.empty()) throw PreconditionError("adequate_basis needs at least one state");
  const std::size_t modes = states.front().number_of_modes();
  const double per_mode = tolerance / static_cast<double>(modes);
  std::vector<unsigned> cutoffs(modes, std::max(1U, margin));
  for (const auto& s : states) {
    if (s.number_of_modes() != modes) throw ShapeError("states disagree on mode count");
    for (std::size_t j = 0; j < modes; ++j) {
      const double mean = std::norm(s.amplitudes[j]);
      unsigned effective = cutoffs[j] - std::min(cutoffs[j], margin);
      while (poisson_tail_bound(mean, effective) > per_mode) ++effective;
      cutoffs[j] = std::max(cutoffs[j], effective + margin);
    }
  }
  return FockBasis(std::move(cutoffs), dimension_limit);
}

}  // namespace gsw::fock
