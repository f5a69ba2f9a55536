#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace gsw {

/// Reduced fraction num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Polynomial coefficient.
///
/// Holds an exact Gaussian rational while every input was rational and no
/// intermediate overflowed 64-bit numerators/denominators; otherwise it
/// degrades to complex double. Commutator rewriting only multiplies by
/// integers, so combinatorial factors stay exact for rational inputs.
class Scalar {
 public:
  /// Floating coefficients with modulus at or below this are treated as zero.
  static constexpr double kZeroThreshold = 1e-12;

  Scalar() = default;
  Scalar(std::int64_t value) : re_{value, 1} {}  // NOLINT(google-explicit-constructor)
  Scalar(int value) : re_{value, 1} {}           // NOLINT(google-explicit-constructor)

  static Scalar rational(std::int64_t num, std::int64_t den);
  static Scalar gaussian(Rational re, Rational im);
  /// Exact whenever the binary value of `x` fits a 64-bit fraction.
  static Scalar from_double(double x);
  static Scalar from_complex(std::complex<double> z);
  /// Forces floating representation.
  static Scalar inexact(std::complex<double> z);
  static Scalar imaginary_unit() { return gaussian({0, 1}, {1, 1}); }

  bool is_exact() const noexcept { return exact_; }
  std::complex<double> value() const noexcept;
  double real() const noexcept { return value().real(); }
  double imag() const noexcept { return value().imag(); }
  /// Exact parts; empty when the scalar is floating.
  std::optional<Rational> exact_real() const;
  std::optional<Rational> exact_imag() const;

  bool is_zero() const noexcept;
  bool is_real() const noexcept;

  Scalar conj() const;
  Scalar pow(unsigned exponent) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(std::int64_t divisor);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }

  /// Exact comparison for exact operands, otherwise |a - b| <= tol * max(1, |a|, |b|).
  static bool approx_equal(const Scalar& a, const Scalar& b, double tol = kZeroThreshold);

  /// Shortest text that parses back to the same value under the expression grammar
  /// (rationals print as decimals when they terminate).
  std::string to_string() const;

 private:
  Rational re_{};
  Rational im_{};
  std::complex<double> float_{};
  bool exact_ = true;
};

}  // namespace gsw
