#include "gsw/classical_polynomial.hpp"

#include <algorithm>
#include <utility>

#include "format_util.hpp"
#include "gsw/error.hpp"

namespace gsw::algebra {
namespace {

void require_same_modes(std::size_t lhs, std::size_t rhs) {
  if (lhs != rhs) {
    throw ShapeError("mode-count mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs));
  }
}

std::complex<double> int_pow(std::complex<double> base, std::uint32_t exponent) {
  std::complex<double> r{1.0, 0.0};
  for (std::uint32_t i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

ClassicalPolynomial::ClassicalPolynomial(std::size_t number_of_modes) : modes_(number_of_modes) {
  if (number_of_modes == 0) throw ShapeError("number_of_modes must be positive");
}

ClassicalPolynomial ClassicalPolynomial::constant(std::size_t number_of_modes, const Scalar& value) {
  ClassicalPolynomial p(number_of_modes);
  p.add_term(MonomialKey(number_of_modes), value);
  return p;
}

ClassicalPolynomial ClassicalPolynomial::alpha(std::size_t number_of_modes, std::size_t mode) {
  if (mode >= number_of_modes) throw ShapeError("mode index out of range");
  MonomialKey key(number_of_modes);
  key[mode].lowered = 1;
  return monomial(std::move(key), 1);
}

ClassicalPolynomial ClassicalPolynomial::conj_alpha(std::size_t number_of_modes, std::size_t mode) {
  if (mode >= number_of_modes) throw ShapeError("mode index out of range");
  MonomialKey key(number_of_modes);
  key[mode].raised = 1;
  return monomial(std::move(key), 1);
}

ClassicalPolynomial ClassicalPolynomial::monomial(MonomialKey key, const Scalar& value) {
  ClassicalPolynomial p(key.size());
  p.add_term(key, value);
  return p;
}

unsigned ClassicalPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [key, _] : terms()) d = std::max(d, total_degree(key));
  return d;
}

ClassicalPolynomial& ClassicalPolynomial::add_term(const MonomialKey& key, const Scalar& value) {
  require_same_modes(modes_, key.size());
  terms_.add(key, value);
  return *this;
}

bool ClassicalPolynomial::is_real_valued(double tol) const { return approx_equal(conj(), tol); }

bool ClassicalPolynomial::approx_equal(const ClassicalPolynomial& other, double tol) const {
  return modes_ == other.modes_ && terms_.approx_equal(other.terms_, tol);
}

ClassicalPolynomial ClassicalPolynomial::conj() const {
  ClassicalPolynomial out(modes_);
  for (const auto& [key, c] : terms()) {
    MonomialKey swapped = key;
    for (auto& e : swapped) std::swap(e.raised, e.lowered);
    out.add_term(swapped, c.conj());
  }
  return out;
}

ClassicalPolynomial ClassicalPolynomial::derivative_alpha(std::size_t mode) const {
  if (mode >= modes_) throw ShapeError("mode index out of range");
  ClassicalPolynomial out(modes_);
  for (const auto& [key, c] : terms()) {
    if (key[mode].lowered == 0) continue;
    MonomialKey k = key;
    const std::int64_t power = k[mode].lowered--;
    out.add_term(k, c * Scalar(power));
  }
  return out;
}

ClassicalPolynomial ClassicalPolynomial::derivative_conj(std::size_t mode) const {
  if (mode >= modes_) throw ShapeError("mode index out of range");
  ClassicalPolynomial out(modes_);
  for (const auto& [key, c] : terms()) {
    if (key[mode].raised == 0) continue;
    MonomialKey k = key;
    const std::int64_t power = k[mode].raised--;
    out.add_term(k, c * Scalar(power));
  }
  return out;
}

std::complex<double> ClassicalPolynomial::evaluate(std::span<const std::complex<double>> alpha) const {
  require_same_modes(modes_, alpha.size());
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [key, c] : terms()) {
    std::complex<double> term = c.value();
    for (std::size_t j = 0; j < modes_; ++j) {
      term *= int_pow(std::conj(alpha[j]), key[j].raised) * int_pow(alpha[j], key[j].lowered);
    }
    sum += term;
  }
  return sum;
}

ClassicalPolynomial& ClassicalPolynomial::operator+=(const ClassicalPolynomial& rhs) {
  require_same_modes(modes_, rhs.modes_);
  terms_.add_all(rhs.terms_, 1);
  return *this;
}

ClassicalPolynomial& ClassicalPolynomial::operator-=(const ClassicalPolynomial& rhs) {
  require_same_modes(modes_, rhs.modes_);
  terms_.add_all(rhs.terms_, -1);
  return *this;
}

ClassicalPolynomial& ClassicalPolynomial::operator*=(const Scalar& factor) {
  terms_.scale(factor);
  return *this;
}

ClassicalPolynomial& ClassicalPolynomial::operator*=(const ClassicalPolynomial& rhs) {
  require_same_modes(modes_, rhs.modes_);
  ClassicalPolynomial out(modes_);
  for (const auto& [lk, lc] : terms()) {
    for (const auto& [rk, rc] : rhs.terms()) {
      MonomialKey k = lk;
      for (std::size_t j = 0; j < modes_; ++j) {
        k[j].raised += rk[j].raised;
        k[j].lowered += rk[j].lowered;
      }
      out.add_term(k, lc * rc);
    }
  }
  *this = std::move(out);
  return *this;
}

ClassicalPolynomial ClassicalPolynomial::operator-() const {
  ClassicalPolynomial p = *this;
  p *= -1;
  return p;
}

std::string ClassicalPolynomial::to_string() const {
  const auto names = default_mode_names(modes_);
  return to_string(names);
}

std::string ClassicalPolynomial::to_string(std::span<const std::string> mode_names) const {
  std::vector<std::pair<MonomialKey, Scalar>> ordered(terms().begin(), terms().end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const unsigned da = total_degree(a.first);
    const unsigned db = total_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::vector<std::pair<Scalar, std::string>> rendered;
  for (const auto& [key, c] : ordered) {
    std::string mono;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j].raised) {
        mono += (mono.empty() ? "" : "*") + detail::power_text("conj(al" + mode_names[j] + ")", key[j].raised);
      }
      if (key[j].lowered) {
        mono += (mono.empty() ? "" : "*") + detail::power_text("al" + mode_names[j], key[j].lowered);
      }
    }
    rendered.emplace_back(c, std::move(mono));
  }
  return detail::join_terms(rendered);
}

ClassicalPolynomial pow(const ClassicalPolynomial& base, unsigned exponent) {
  ClassicalPolynomial result = ClassicalPolynomial::constant(base.number_of_modes(), 1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace gsw::algebra
