#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>

#include "gsw/monomial.hpp"
#include "gsw/scalar.hpp"
#include "gsw/term_map.hpp"

namespace gsw::algebra {

/// Commutative polynomial in mode variables alpha_j and their conjugates:
/// g = sum A * prod_j conj(alpha_j)^raised alpha_j^lowered.
class ClassicalPolynomial {
 public:
  explicit ClassicalPolynomial(std::size_t number_of_modes);

  static ClassicalPolynomial constant(std::size_t number_of_modes, const Scalar& value);
  static ClassicalPolynomial alpha(std::size_t number_of_modes, std::size_t mode);
  static ClassicalPolynomial conj_alpha(std::size_t number_of_modes, std::size_t mode);
  static ClassicalPolynomial monomial(MonomialKey key, const Scalar& value);

  std::size_t number_of_modes() const noexcept { return modes_; }
  const std::map<MonomialKey, Scalar>& terms() const noexcept { return terms_.terms(); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const;
  Scalar coefficient(const MonomialKey& key) const { return terms_.coefficient(key); }

  ClassicalPolynomial& add_term(const MonomialKey& key, const Scalar& value);

  /// Coefficients are conjugate-symmetric under swapping alpha and conj(alpha)
  /// powers, i.e. the polynomial takes real values.
  bool is_real_valued(double tol = Scalar::kZeroThreshold) const;
  bool approx_equal(const ClassicalPolynomial& other, double tol = Scalar::kZeroThreshold) const;

  /// Complex conjugate of the function.
  ClassicalPolynomial conj() const;
  /// Wirtinger partials d/d(alpha_j) and d/d(conj(alpha_j)).
  ClassicalPolynomial derivative_alpha(std::size_t mode) const;
  ClassicalPolynomial derivative_conj(std::size_t mode) const;

  /// Exact polynomial evaluation. Throws ShapeError on mode-count mismatch.
  std::complex<double> evaluate(std::span<const std::complex<double>> alpha) const;

  ClassicalPolynomial& operator+=(const ClassicalPolynomial& rhs);
  ClassicalPolynomial& operator-=(const ClassicalPolynomial& rhs);
  ClassicalPolynomial& operator*=(const Scalar& factor);
  ClassicalPolynomial& operator*=(const ClassicalPolynomial& rhs);
  ClassicalPolynomial operator-() const;

  friend ClassicalPolynomial operator+(ClassicalPolynomial lhs, const ClassicalPolynomial& rhs) { return lhs += rhs; }
  friend ClassicalPolynomial operator-(ClassicalPolynomial lhs, const ClassicalPolynomial& rhs) { return lhs -= rhs; }
  friend ClassicalPolynomial operator*(ClassicalPolynomial lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend ClassicalPolynomial operator*(const Scalar& lhs, ClassicalPolynomial rhs) { return rhs *= lhs; }
  friend ClassicalPolynomial operator*(ClassicalPolynomial lhs, const ClassicalPolynomial& rhs) { return lhs *= rhs; }
  friend bool operator==(const ClassicalPolynomial& lhs, const ClassicalPolynomial& rhs) { return lhs.approx_equal(rhs); }

  std::string to_string() const;
  std::string to_string(std::span<const std::string> mode_names) const;

 private:
  std::size_t modes_;
  detail::TermMap<MonomialKey> terms_;
};

ClassicalPolynomial pow(const ClassicalPolynomial& base, unsigned exponent);

}  // namespace gsw::algebra
