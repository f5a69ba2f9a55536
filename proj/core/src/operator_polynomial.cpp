#include "gsw/operator_polynomial.hpp"

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

std::int64_t binomial(std::uint32_t n, std::uint32_t k) {
  std::int64_t r = 1;
  for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// (a^dagger)^p a^q (a^dagger)^r a^s = sum_k C(q,k) C(r,k) k! (a^dagger)^(p+r-k) a^(q+s-k)
std::vector<std::pair<ModeExponent, std::int64_t>> mode_product(const ModeExponent& left,
                                                                 const ModeExponent& right) {
  std::vector<std::pair<ModeExponent, std::int64_t>> out;
  const std::uint32_t kmax = std::min(left.lowered, right.raised);
  std::int64_t factorial = 1;
  for (std::uint32_t k = 0; k <= kmax; ++k) {
    if (k > 0) factorial *= k;
    out.push_back({ModeExponent{left.raised + right.raised - k, left.lowered + right.lowered - k},
                   binomial(left.lowered, k) * binomial(right.raised, k) * factorial});
  }
  return out;
}

void accumulate_product(const MonomialKey& left, const MonomialKey& right, const Scalar& coeff,
                        OperatorPolynomial& out) {
  const std::size_t modes = left.size();
  std::vector<std::vector<std::pair<ModeExponent, std::int64_t>>> per_mode(modes);
  for (std::size_t j = 0; j < modes; ++j) per_mode[j] = mode_product(left[j], right[j]);

  // Odometer over the per-mode expansions.
  std::vector<std::size_t> pick(modes, 0);
  MonomialKey key(modes);
  while (true) {
    std::int64_t factor = 1;
    for (std::size_t j = 0; j < modes; ++j) {
      key[j] = per_mode[j][pick[j]].first;
      factor *= per_mode[j][pick[j]].second;
    }
    out.add_term(key, coeff * Scalar(factor));
    std::size_t j = 0;
    while (j < modes && ++pick[j] == per_mode[j].size()) {
      pick[j] = 0;
      ++j;
    }
    if (j == modes) break;
  }
}

}  // namespace

OperatorPolynomial::OperatorPolynomial(std::size_t number_of_modes) : modes_(number_of_modes) {
  if (number_of_modes == 0) throw ShapeError("number_of_modes must be positive");
}

OperatorPolynomial OperatorPolynomial::constant(std::size_t number_of_modes, const Scalar& value) {
  OperatorPolynomial p(number_of_modes);
  p.add_term(MonomialKey(number_of_modes), value);
  return p;
}

OperatorPolynomial OperatorPolynomial::annihilation(std::size_t number_of_modes, std::size_t mode) {
  if (mode >= number_of_modes) throw ShapeError("mode index out of range");
  MonomialKey key(number_of_modes);
  key[mode].lowered = 1;
  return monomial(std::move(key), 1);
}

OperatorPolynomial OperatorPolynomial::creation(std::size_t number_of_modes, std::size_t mode) {
  if (mode >= number_of_modes) throw ShapeError("mode index out of range");
  MonomialKey key(number_of_modes);
  key[mode].raised = 1;
  return monomial(std::move(key), 1);
}

OperatorPolynomial OperatorPolynomial::monomial(MonomialKey key, const Scalar& value) {
  OperatorPolynomial p(key.size());
  p.add_term(key, value);
  return p;
}

unsigned OperatorPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [key, _] : terms()) d = std::max(d, total_degree(key));
  return d;
}

OperatorPolynomial& OperatorPolynomial::add_term(const MonomialKey& key, const Scalar& value) {
  require_same_modes(modes_, key.size());
  terms_.add(key, value);
  return *this;
}

bool OperatorPolynomial::is_hermitian(double tol) const { return approx_equal(adjoint(*this), tol); }

bool OperatorPolynomial::approx_equal(const OperatorPolynomial& other, double tol) const {
  return modes_ == other.modes_ && terms_.approx_equal(other.terms_, tol);
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& rhs) {
  require_same_modes(modes_, rhs.modes_);
  terms_.add_all(rhs.terms_, 1);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& rhs) {
  require_same_modes(modes_, rhs.modes_);
  terms_.add_all(rhs.terms_, -1);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(const Scalar& factor) {
  terms_.scale(factor);
  return *this;
}

OperatorPolynomial OperatorPolynomial::operator-() const {
  OperatorPolynomial p = *this;
  p *= -1;
  return p;
}

OperatorPolynomial operator*(const OperatorPolynomial& lhs, const OperatorPolynomial& rhs) {
  return multiply(lhs, rhs);
}

std::string OperatorPolynomial::to_string() const {
  const auto names = default_mode_names(modes_);
  return to_string(names);
}

std::string OperatorPolynomial::to_string(std::span<const std::string> mode_names) const {
  std::vector<std::pair<MonomialKey, Scalar>> ordered(terms().begin(), terms().end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const unsigned da = total_degree(a.first);
    const unsigned db = total_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::vector<std::pair<Scalar, std::string>> rendered;
  for (const auto& [key, c] : ordered) {
    std::vector<std::string> factors;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j].raised) factors.push_back(detail::power_text("ad" + mode_names[j], key[j].raised));
    }
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j].lowered) factors.push_back(detail::power_text("a" + mode_names[j], key[j].lowered));
    }
    std::string mono;
    for (const auto& f : factors) mono += (mono.empty() ? "" : "*") + f;
    rendered.emplace_back(c, std::move(mono));
  }
  return detail::join_terms(rendered);
}

OperatorPolynomial multiply(const OperatorPolynomial& lhs, const OperatorPolynomial& rhs) {
  require_same_modes(lhs.number_of_modes(), rhs.number_of_modes());
  OperatorPolynomial out(lhs.number_of_modes());
  for (const auto& [lk, lc] : lhs.terms()) {
    for (const auto& [rk, rc] : rhs.terms()) accumulate_product(lk, rk, lc * rc, out);
  }
  return out;
}

OperatorPolynomial pow(const OperatorPolynomial& base, unsigned exponent) {
  OperatorPolynomial result = OperatorPolynomial::identity(base.number_of_modes());
  for (unsigned i = 0; i < exponent; ++i) result = multiply(result, base);
  return result;
}

OperatorPolynomial adjoint(const OperatorPolynomial& p) {
  OperatorPolynomial out(p.number_of_modes());
  for (const auto& [key, c] : p.terms()) {
    MonomialKey swapped = key;
    for (auto& e : swapped) std::swap(e.raised, e.lowered);
    out.add_term(swapped, c.conj());
  }
  return out;
}

std::vector<std::string> default_mode_names(std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t j = 0; j < count; ++j) names.push_back(std::to_string(j));
  return names;
}

}  // namespace gsw::algebra
