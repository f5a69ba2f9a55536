#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gsw/scalar.hpp"
#include "gsw/term_map.hpp"

namespace gsw::algebra {

/// Exponents of (q_0..q_{n-1}, p_0..p_{n-1}); length 2n.
using PhaseKey = std::vector<std::uint32_t>;

/// Real polynomial on a 2n-dimensional phase space with canonical pairs
/// (q_i, p_i), written phiI/piI (or qI/pI) in expressions. Coefficients are
/// real Scalars so that symbolic derivatives of rational inputs stay exact.
class PhasePolynomial {
 public:
  explicit PhasePolynomial(std::size_t degrees_of_freedom);

  static PhasePolynomial constant(std::size_t degrees_of_freedom, const Scalar& value);
  static PhasePolynomial coordinate(std::size_t degrees_of_freedom, std::size_t index);
  static PhasePolynomial momentum(std::size_t degrees_of_freedom, std::size_t index);

  std::size_t degrees_of_freedom() const noexcept { return dof_; }
  const std::map<PhaseKey, Scalar>& terms() const noexcept { return terms_.terms(); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const;
  Scalar coefficient(const PhaseKey& key) const { return terms_.coefficient(key); }

  /// Throws PreconditionError for non-real coefficients.
  PhasePolynomial& add_term(const PhaseKey& key, const Scalar& value);

  PhasePolynomial derivative_coordinate(std::size_t index) const;
  PhasePolynomial derivative_momentum(std::size_t index) const;
  /// Sum of terms of exactly `degree`.
  PhasePolynomial homogeneous_part(unsigned degree) const;
  /// Every monomial depends on coordinates only or on momenta only (H = T(p) + V(q)).
  bool is_separable() const;

  double evaluate(std::span<const double> q, std::span<const double> p) const;
  bool approx_equal(const PhasePolynomial& other, double tol = Scalar::kZeroThreshold) const;

  PhasePolynomial& operator+=(const PhasePolynomial& rhs);
  PhasePolynomial& operator-=(const PhasePolynomial& rhs);
  PhasePolynomial& operator*=(const Scalar& factor);
  PhasePolynomial& operator*=(const PhasePolynomial& rhs);
  PhasePolynomial operator-() const;

  friend PhasePolynomial operator+(PhasePolynomial lhs, const PhasePolynomial& rhs) { return lhs += rhs; }
  friend PhasePolynomial operator-(PhasePolynomial lhs, const PhasePolynomial& rhs) { return lhs -= rhs; }
  friend PhasePolynomial operator*(PhasePolynomial lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend PhasePolynomial operator*(const Scalar& lhs, PhasePolynomial rhs) { return rhs *= lhs; }
  friend PhasePolynomial operator*(PhasePolynomial lhs, const PhasePolynomial& rhs) { return lhs *= rhs; }
  friend bool operator==(const PhasePolynomial& lhs, const PhasePolynomial& rhs) { return lhs.approx_equal(rhs); }

  std::string to_string() const;

 private:
  std::size_t dof_;
  detail::TermMap<PhaseKey> terms_;
};

PhasePolynomial pow(const PhasePolynomial& base, unsigned exponent);

/// Flattened double-precision copy of a PhasePolynomial for hot loops.
class PhaseEvaluator {
 public:
  explicit PhaseEvaluator(const PhasePolynomial& p);

  std::size_t degrees_of_freedom() const noexcept { return dof_; }
  double operator()(std::span<const double> q, std::span<const double> p) const;

 private:
  std::size_t dof_;
  std::vector<double> coefficients_;
  std::vector<std::uint32_t> exponents_;  // row-major, 2 * dof_ per term
};

}  // namespace gsw::algebra
