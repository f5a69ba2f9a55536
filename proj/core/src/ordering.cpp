#include "gsw/ordering.hpp"

#include <utility>

#include "gsw/error.hpp"

namespace gsw::algebra {
namespace {

MonomialKey key_of_word(std::size_t modes, const OperatorWord& word) {
  MonomialKey key(modes);
  for (const auto& f : word) {
    if (f.mode >= modes) throw ShapeError("ladder factor mode out of range");
    if (f.creation) {
      ++key[f.mode].raised;
    } else {
      ++key[f.mode].lowered;
    }
  }
  return key;
}

}  // namespace

RawOperatorSum RawOperatorSum::constant(std::size_t number_of_modes, const Scalar& value) {
  RawOperatorSum s(number_of_modes);
  s.add_term(value, {});
  return s;
}

RawOperatorSum RawOperatorSum::factor(std::size_t number_of_modes, LadderFactor f) {
  if (f.mode >= number_of_modes) throw ShapeError("ladder factor mode out of range");
  RawOperatorSum s(number_of_modes);
  s.add_term(1, {f});
  return s;
}

RawOperatorSum& RawOperatorSum::add_term(const Scalar& coefficient, OperatorWord word) {
  if (!coefficient.is_zero()) terms_.emplace_back(coefficient, std::move(word));
  return *this;
}

RawOperatorSum& RawOperatorSum::operator+=(const RawOperatorSum& rhs) {
  if (modes_ != rhs.modes_) throw ShapeError("mode-count mismatch");
  for (const auto& t : rhs.terms_) terms_.push_back(t);
  return *this;
}

RawOperatorSum& RawOperatorSum::operator*=(const Scalar& factor) {
  RawOperatorSum out(modes_);
  for (auto& [c, w] : terms_) out.add_term(c * factor, std::move(w));
  *this = std::move(out);
  return *this;
}

RawOperatorSum operator*(const RawOperatorSum& lhs, const RawOperatorSum& rhs) {
  if (lhs.modes_ != rhs.modes_) throw ShapeError("mode-count mismatch");
  RawOperatorSum out(lhs.modes_);
  for (const auto& [lc, lw] : lhs.terms_) {
    for (const auto& [rc, rw] : rhs.terms_) {
      OperatorWord w = lw;
      w.insert(w.end(), rw.begin(), rw.end());
      out.add_term(lc * rc, std::move(w));
    }
  }
  return out;
}

OperatorPolynomial normal_order_word(std::size_t number_of_modes, const OperatorWord& word,
                                     const RewriteSelector& selector) {
  OperatorPolynomial result(number_of_modes);
  std::vector<std::pair<Scalar, OperatorWord>> pending{{Scalar(1), word}};
  std::vector<std::size_t> candidates;
  while (!pending.empty()) {
    auto [coeff, w] = std::move(pending.back());
    pending.pop_back();
    candidates.clear();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!w[i].creation && w[i + 1].creation) candidates.push_back(i);
    }
    if (candidates.empty()) {
      result.add_term(key_of_word(number_of_modes, w), coeff);
      continue;
    }
    const std::size_t i = selector ? selector(candidates) : candidates.front();
    const bool same_mode = w[i].mode == w[i + 1].mode;
    if (same_mode) {
      OperatorWord contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      contracted.insert(contracted.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
      pending.emplace_back(coeff, std::move(contracted));
    }
    std::swap(w[i], w[i + 1]);
    pending.emplace_back(coeff, std::move(w));
  }
  return result;
}

OperatorPolynomial normal_order(const RawOperatorSum& raw) {
  OperatorPolynomial out(raw.number_of_modes());
  for (const auto& [c, w] : raw.terms()) out += normal_order_word(raw.number_of_modes(), w) * c;
  return out;
}

OperatorPolynomial normal_product(const RawOperatorSum& raw) {
  OperatorPolynomial out(raw.number_of_modes());
  for (const auto& [c, w] : raw.terms()) out.add_term(key_of_word(raw.number_of_modes(), w), c);
  return out;
}

OperatorPolynomial normal_product(const OperatorPolynomial& p) { return p; }

OperatorPolynomial normal_product(const ClassicalPolynomial& g) {
  OperatorPolynomial out(g.number_of_modes());
  for (const auto& [key, c] : g.terms()) out.add_term(key, c);
  return out;
}

OperatorPolynomial quantize_raw(const ClassicalPolynomial& g) {
  const std::size_t modes = g.number_of_modes();
  OperatorPolynomial out(modes);
  for (const auto& [key, c] : g.terms()) {
    // Per mode, a^j (a^dagger)^k; distinct modes commute so the ordered
    // product of single-mode factors is the full word.
    OperatorPolynomial term = OperatorPolynomial::constant(modes, c);
    for (std::size_t j = 0; j < modes; ++j) {
      MonomialKey lower(modes);
      MonomialKey raise(modes);
      lower[j].lowered = key[j].lowered;
      raise[j].raised = key[j].raised;
      term = multiply(term, multiply(OperatorPolynomial::monomial(lower, 1), OperatorPolynomial::monomial(raise, 1)));
    }
    out += term;
  }
  return out;
}

}  // namespace gsw::algebra
