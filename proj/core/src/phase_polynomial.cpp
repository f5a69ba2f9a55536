#include "gsw/phase_polynomial.hpp"

#include <algorithm>
#include <utility>

#include "format_util.hpp"
#include "gsw/error.hpp"

namespace gsw::algebra {
namespace {

void require_same_dof(std::size_t lhs, std::size_t rhs) {
  if (lhs != rhs) {
    throw ShapeError("degree-of-freedom mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs));
  }
}

unsigned key_degree(const PhaseKey& key) {
  unsigned d = 0;
  for (auto e : key) d += e;
  return d;
}

}  // namespace

PhasePolynomial::PhasePolynomial(std::size_t degrees_of_freedom) : dof_(degrees_of_freedom) {
  if (degrees_of_freedom == 0) throw ShapeError("degrees_of_freedom must be positive");
}

PhasePolynomial PhasePolynomial::constant(std::size_t degrees_of_freedom, const Scalar& value) {
  PhasePolynomial p(degrees_of_freedom);
  p.add_term(PhaseKey(2 * degrees_of_freedom, 0), value);
  return p;
}

PhasePolynomial PhasePolynomial::coordinate(std::size_t degrees_of_freedom, std::size_t index) {
  if (index >= degrees_of_freedom) throw ShapeError("coordinate index out of range");
  PhasePolynomial p(degrees_of_freedom);
  PhaseKey key(2 * degrees_of_freedom, 0);
  key[index] = 1;
  p.add_term(key, 1);
  return p;
}

PhasePolynomial PhasePolynomial::momentum(std::size_t degrees_of_freedom, std::size_t index) {
  if (index >= degrees_of_freedom) throw ShapeError("momentum index out of range");
  PhasePolynomial p(degrees_of_freedom);
  PhaseKey key(2 * degrees_of_freedom, 0);
  key[degrees_of_freedom + index] = 1;
  p.add_term(key, 1);
  return p;
}

unsigned PhasePolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [key, _] : terms()) d = std::max(d, key_degree(key));
  return d;
}

PhasePolynomial& PhasePolynomial::add_term(const PhaseKey& key, const Scalar& value) {
  if (key.size() != 2 * dof_) throw ShapeError("phase key has wrong length");
  if (!value.is_real()) throw PreconditionError("phase-space polynomials take real coefficients");
  terms_.add(key, value);
  return *this;
}

PhasePolynomial PhasePolynomial::derivative_coordinate(std::size_t index) const {
  if (index >= dof_) throw ShapeError("coordinate index out of range");
  PhasePolynomial out(dof_);
  for (const auto& [key, c] : terms()) {
    if (key[index] == 0) continue;
    PhaseKey k = key;
    const std::int64_t power = k[index]--;
    out.add_term(k, c * Scalar(power));
  }
  return out;
}

PhasePolynomial PhasePolynomial::derivative_momentum(std::size_t index) const {
  if (index >= dof_) throw ShapeError("momentum index out of range");
  const std::size_t slot = dof_ + index;
  PhasePolynomial out(dof_);
  for (const auto& [key, c] : terms()) {
    if (key[slot] == 0) continue;
    PhaseKey k = key;
    const std::int64_t power = k[slot]--;
    out.add_term(k, c * Scalar(power));
  }
  return out;
}

PhasePolynomial PhasePolynomial::homogeneous_part(unsigned degree) const {
  PhasePolynomial out(dof_);
  for (const auto& [key, c] : terms()) {
    if (key_degree(key) == degree) out.add_term(key, c);
  }
  return out;
}

bool PhasePolynomial::is_separable() const {
  for (const auto& [key, _] : terms()) {
    const bool has_q = std::any_of(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(dof_),
                                   [](auto e) { return e != 0; });
    const bool has_p = std::any_of(key.begin() + static_cast<std::ptrdiff_t>(dof_), key.end(),
                                   [](auto e) { return e != 0; });
    if (has_q && has_p) return false;
  }
  return true;
}

double PhasePolynomial::evaluate(std::span<const double> q, std::span<const double> p) const {
  require_same_dof(dof_, q.size());
  require_same_dof(dof_, p.size());
  double sum = 0.0;
  for (const auto& [key, c] : terms()) {
    double term = c.real();
    for (std::size_t i = 0; i < dof_; ++i) {
      for (std::uint32_t e = 0; e < key[i]; ++e) term *= q[i];
      for (std::uint32_t e = 0; e < key[dof_ + i]; ++e) term *= p[i];
    }
    sum += term;
  }
  return sum;
}

bool PhasePolynomial::approx_equal(const PhasePolynomial& other, double tol) const {
  return dof_ == other.dof_ && terms_.approx_equal(other.terms_, tol);
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& rhs) {
  require_same_dof(dof_, rhs.dof_);
  terms_.add_all(rhs.terms_, 1);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& rhs) {
  require_same_dof(dof_, rhs.dof_);
  terms_.add_all(rhs.terms_, -1);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(const Scalar& factor) {
  if (!factor.is_real()) throw PreconditionError("phase-space polynomials take real coefficients");
  terms_.scale(factor);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(const PhasePolynomial& rhs) {
  require_same_dof(dof_, rhs.dof_);
  PhasePolynomial out(dof_);
  for (const auto& [lk, lc] : terms()) {
    for (const auto& [rk, rc] : rhs.terms()) {
      PhaseKey k = lk;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += rk[i];
      out.add_term(k, lc * rc);
    }
  }
  *this = std::move(out);
  return *this;
}

PhasePolynomial PhasePolynomial::operator-() const {
  PhasePolynomial p = *this;
  p *= -1;
  return p;
}

std::string PhasePolynomial::to_string() const {
  std::vector<std::pair<PhaseKey, Scalar>> ordered(terms().begin(), terms().end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const unsigned da = key_degree(a.first);
    const unsigned db = key_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::vector<std::pair<Scalar, std::string>> rendered;
  for (const auto& [key, c] : ordered) {
    std::string mono;
    for (std::size_t i = 0; i < dof_; ++i) {
      if (key[i]) mono += (mono.empty() ? "" : "*") + detail::power_text("phi" + std::to_string(i), key[i]);
    }
    for (std::size_t i = 0; i < dof_; ++i) {
      if (key[dof_ + i]) {
        mono += (mono.empty() ? "" : "*") + detail::power_text("pi" + std::to_string(i), key[dof_ + i]);
      }
    }
    rendered.emplace_back(c, std::move(mono));
  }
  return detail::join_terms(rendered);
}

PhasePolynomial pow(const PhasePolynomial& base, unsigned exponent) {
  PhasePolynomial result = PhasePolynomial::constant(base.degrees_of_freedom(), 1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

PhaseEvaluator::PhaseEvaluator(const PhasePolynomial& p) : dof_(p.degrees_of_freedom()) {
  for (const auto& [key, c] : p.terms()) {
    coefficients_.push_back(c.real());
    exponents_.insert(exponents_.end(), key.begin(), key.end());
  }
}

double PhaseEvaluator::operator()(std::span<const double> q, std::span<const double> p) const {
  const std::size_t width = 2 * dof_;
  double sum = 0.0;
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    double term = coefficients_[t];
    const std::uint32_t* e = exponents_.data() + t * width;
    for (std::size_t i = 0; i < dof_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= q[i];
      for (std::uint32_t k = 0; k < e[dof_ + i]; ++k) term *= p[i];
    }
    sum += term;
  }
  return sum;
}

}  // namespace gsw::algebra
