#include "gsw/scalar.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace gsw {
namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

constexpr i128 kInt64Max = std::numeric_limits<std::int64_t>::max();

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

std::optional<Rational> reduce(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational{0, 1};
  u128 g = gcd128(abs128(num), static_cast<u128>(den));
  num /= static_cast<i128>(g);
  den /= static_cast<i128>(g);
  if (num > kInt64Max || num < -kInt64Max || den > kInt64Max) return std::nullopt;
  return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<Rational> add(const Rational& a, const Rational& b) {
  if (a.den == b.den) return reduce(static_cast<i128>(a.num) + b.num, a.den);
  return reduce(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> mul(const Rational& a, const Rational& b) {
  // Cross-cancel first so the 128-bit product never overflows.
  u128 g1 = gcd128(abs128(a.num), static_cast<u128>(b.den));
  u128 g2 = gcd128(abs128(b.num), static_cast<u128>(a.den));
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  i128 n1 = a.num / static_cast<i128>(g1);
  i128 d2 = b.den / static_cast<i128>(g1);
  i128 n2 = b.num / static_cast<i128>(g2);
  i128 d1 = a.den / static_cast<i128>(g2);
  return reduce(n1 * n2, d1 * d2);
}

std::optional<Rational> rational_from_double(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational{0, 1};
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5, 1)
  auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  while ((m & 1) == 0 && exponent < 0) {
    m /= 2;
    ++exponent;
  }
  if (exponent >= 0) {
    if (exponent > 62) return std::nullopt;
    return reduce(static_cast<i128>(m) << exponent, 1);
  }
  if (-exponent > 62) return std::nullopt;
  return reduce(m, static_cast<i128>(1) << (-exponent));
}

std::string format_real(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return fmt::format("{}", static_cast<long long>(v));
  return fmt::format("{}", v);
}

}  // namespace

Scalar Scalar::rational(std::int64_t num, std::int64_t den) {
  auto r = reduce(num, den);
  if (!r) return inexact({static_cast<double>(num) / static_cast<double>(den), 0.0});
  Scalar s;
  s.re_ = *r;
  return s;
}

Scalar Scalar::gaussian(Rational re, Rational im) {
  auto r = reduce(re.num, re.den);
  auto i = reduce(im.num, im.den);
  if (!r || !i) return inexact({re.to_double(), im.to_double()});
  Scalar s;
  s.re_ = *r;
  s.im_ = *i;
  return s;
}

Scalar Scalar::from_double(double x) { return from_complex({x, 0.0}); }

Scalar Scalar::from_complex(std::complex<double> z) {
  auto r = rational_from_double(z.real());
  auto i = rational_from_double(z.imag());
  if (!r || !i) return inexact(z);
  Scalar s;
  s.re_ = *r;
  s.im_ = *i;
  return s;
}

Scalar Scalar::inexact(std::complex<double> z) {
  Scalar s;
  s.exact_ = false;
  s.float_ = z;
  return s;
}

std::complex<double> Scalar::value() const noexcept {
  if (!exact_) return float_;
  return {re_.to_double(), im_.to_double()};
}

std::optional<Rational> Scalar::exact_real() const {
  if (!exact_) return std::nullopt;
  return re_;
}

std::optional<Rational> Scalar::exact_imag() const {
  if (!exact_) return std::nullopt;
  return im_;
}

bool Scalar::is_zero() const noexcept {
  if (exact_) return re_.num == 0 && im_.num == 0;
  return std::abs(float_) <= kZeroThreshold;
}

bool Scalar::is_real() const noexcept {
  if (exact_) return im_.num == 0;
  return std::abs(float_.imag()) <= kZeroThreshold * std::max(1.0, std::abs(float_.real()));
}

Scalar Scalar::conj() const {
  Scalar s = *this;
  s.im_.num = -s.im_.num;
  s.float_ = std::conj(s.float_);
  return s;
}

Scalar Scalar::pow(unsigned exponent) const {
  Scalar result(1);
  Scalar base = *this;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.re_.num = -s.re_.num;
  s.im_.num = -s.im_.num;
  s.float_ = -s.float_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (exact_ && rhs.exact_) {
    auto r = add(re_, rhs.re_);
    auto i = add(im_, rhs.im_);
    if (r && i) {
      re_ = *r;
      im_ = *i;
      return *this;
    }
  }
  *this = inexact(value() + rhs.value());
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) { return *this += -rhs; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (exact_ && rhs.exact_) {
    auto ac = mul(re_, rhs.re_);
    auto bd = mul(im_, rhs.im_);
    auto ad = mul(re_, rhs.im_);
    auto bc = mul(im_, rhs.re_);
    if (ac && bd && ad && bc) {
      auto r = add(*ac, Rational{-bd->num, bd->den});
      auto i = add(*ad, *bc);
      if (r && i) {
        re_ = *r;
        im_ = *i;
        return *this;
      }
    }
  }
  *this = inexact(value() * rhs.value());
  return *this;
}

Scalar& Scalar::operator/=(std::int64_t divisor) {
  if (exact_) {
    auto r = reduce(re_.num, static_cast<i128>(re_.den) * divisor);
    auto i = reduce(im_.num, static_cast<i128>(im_.den) * divisor);
    if (r && i) {
      re_ = *r;
      im_ = *i;
      return *this;
    }
  }
  *this = inexact(value() / static_cast<double>(divisor));
  return *this;
}

bool Scalar::approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.exact_ && b.exact_) return a.re_ == b.re_ && a.im_ == b.im_;
  const auto va = a.value();
  const auto vb = b.value();
  const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
  return std::abs(va - vb) <= tol * scale;
}

std::string Scalar::to_string() const {
  const auto v = value();
  const bool has_im = exact_ ? im_.num != 0 : v.imag() != 0.0;
  const bool has_re = exact_ ? re_.num != 0 : v.real() != 0.0;
  if (!has_im) return format_real(v.real());
  std::string im = format_real(std::abs(v.imag())) + "i";
  if (im == "1i") im = "i";
  if (!has_re) return v.imag() < 0 ? "-" + im : im;
  return "(" + format_real(v.real()) + (v.imag() < 0 ? "-" : "+") + im + ")";
}

}  // namespace gsw
