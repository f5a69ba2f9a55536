#pragma once

#include <map>
#include <span>
#include <string>

#include "gsw/monomial.hpp"
#include "gsw/scalar.hpp"
#include "gsw/term_map.hpp"

namespace gsw::algebra {

/// Polynomial in multi-mode bosonic ladder operators, stored in canonical
/// normal-ordered form: every monomial is prod_j (a_j^dagger)^raised (a_j)^lowered
/// with creation factors to the left. Distinct modes commute, so the per-mode
/// factor order inside a monomial is immaterial.
class OperatorPolynomial {
 public:
  explicit OperatorPolynomial(std::size_t number_of_modes);

  static OperatorPolynomial constant(std::size_t number_of_modes, const Scalar& value);
  static OperatorPolynomial identity(std::size_t number_of_modes) { return constant(number_of_modes, 1); }
  static OperatorPolynomial annihilation(std::size_t number_of_modes, std::size_t mode);
  static OperatorPolynomial creation(std::size_t number_of_modes, std::size_t mode);
  static OperatorPolynomial monomial(MonomialKey key, const Scalar& value);

  std::size_t number_of_modes() const noexcept { return modes_; }
  const std::map<MonomialKey, Scalar>& terms() const noexcept { return terms_.terms(); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  unsigned degree() const;
  Scalar coefficient(const MonomialKey& key) const { return terms_.coefficient(key); }

  /// Adds value * key in place; the key must already be normal-ordered.
  OperatorPolynomial& add_term(const MonomialKey& key, const Scalar& value);

  /// adjoint(p) == p within `tol`.
  bool is_hermitian(double tol = Scalar::kZeroThreshold) const;
  bool approx_equal(const OperatorPolynomial& other, double tol = Scalar::kZeroThreshold) const;

  OperatorPolynomial& operator+=(const OperatorPolynomial& rhs);
  OperatorPolynomial& operator-=(const OperatorPolynomial& rhs);
  OperatorPolynomial& operator*=(const Scalar& factor);
  OperatorPolynomial operator-() const;

  friend OperatorPolynomial operator+(OperatorPolynomial lhs, const OperatorPolynomial& rhs) { return lhs += rhs; }
  friend OperatorPolynomial operator-(OperatorPolynomial lhs, const OperatorPolynomial& rhs) { return lhs -= rhs; }
  friend OperatorPolynomial operator*(OperatorPolynomial lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend OperatorPolynomial operator*(const Scalar& lhs, OperatorPolynomial rhs) { return rhs *= lhs; }
  friend OperatorPolynomial operator*(const OperatorPolynomial& lhs, const OperatorPolynomial& rhs);
  friend bool operator==(const OperatorPolynomial& lhs, const OperatorPolynomial& rhs) { return lhs.approx_equal(rhs); }

  /// Human-readable form, highest degree first, e.g. "ad0^2*a0^2 + 4*ad0*a0 + 2".
  std::string to_string() const;
  std::string to_string(std::span<const std::string> mode_names) const;

 private:
  std::size_t modes_;
  detail::TermMap<MonomialKey> terms_;
};

/// Canonical normal-ordered product. Throws ShapeError on mode-count mismatch.
OperatorPolynomial multiply(const OperatorPolynomial& lhs, const OperatorPolynomial& rhs);
OperatorPolynomial pow(const OperatorPolynomial& base, unsigned exponent);
/// Hermitian conjugate: conjugated coefficients, each monomial reversed and daggered.
OperatorPolynomial adjoint(const OperatorPolynomial& p);

}  // namespace gsw::algebra
