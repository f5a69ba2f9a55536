#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/scalar.hpp"

namespace gsw::algebra {

struct LadderFactor {
  std::uint32_t mode = 0;
  bool creation = false;

  friend bool operator==(const LadderFactor&, const LadderFactor&) = default;
};

/// Ordered product of ladder operators, leftmost factor first.
using OperatorWord = std::vector<LadderFactor>;

/// Linear combination of operator words kept in written order: no
/// commutators applied, no reordering. This is the input the normal product
/// N(.) acts on; canonical OperatorPolynomials are already normal-ordered.
class RawOperatorSum {
 public:
  explicit RawOperatorSum(std::size_t number_of_modes) : modes_(number_of_modes) {}

  static RawOperatorSum constant(std::size_t number_of_modes, const Scalar& value);
  static RawOperatorSum factor(std::size_t number_of_modes, LadderFactor f);

  std::size_t number_of_modes() const noexcept { return modes_; }
  const std::vector<std::pair<Scalar, OperatorWord>>& terms() const noexcept { return terms_; }

  RawOperatorSum& add_term(const Scalar& coefficient, OperatorWord word);

  RawOperatorSum& operator+=(const RawOperatorSum& rhs);
  RawOperatorSum& operator*=(const Scalar& factor);
  /// Word concatenation, distributed over the sums.
  friend RawOperatorSum operator*(const RawOperatorSum& lhs, const RawOperatorSum& rhs);

 private:
  std::size_t modes_;
  std::vector<std::pair<Scalar, OperatorWord>> terms_;
};

/// Chooses which adjacent (annihilator, creator) pair to rewrite next. Receives
/// the candidate positions i (word[i] annihilator, word[i+1] creator) and
/// returns one of them.
using RewriteSelector = std::function<std::size_t(std::span<const std::size_t> candidates)>;

/// Normal-orders a word by repeated adjacent rewrites: a_j a_j^dagger ->
/// a_j^dagger a_j + 1, and plain swaps for distinct modes. The default selector
/// always rewrites the leftmost inversion.
OperatorPolynomial normal_order_word(std::size_t number_of_modes, const OperatorWord& word,
                                     const RewriteSelector& selector = {});

/// Value-preserving normal ordering of a raw sum (commutators applied).
OperatorPolynomial normal_order(const RawOperatorSum& raw);

/// Normal product N(.): creators moved left of annihilators WITHOUT
/// commutators; coefficients unchanged.
OperatorPolynomial normal_product(const RawOperatorSum& raw);
/// Identity on canonical operator polynomials (already normal form).
OperatorPolynomial normal_product(const OperatorPolynomial& p);
/// alpha_j -> a_j, conj(alpha_j) -> a_j^dagger, then N(.). This is G_n.
OperatorPolynomial normal_product(const ClassicalPolynomial& g);

/// Raw quantization G_r: each monomial becomes a^j (a^dagger)^k with the
/// annihilators written first, then normal-ordered with commutators.
OperatorPolynomial quantize_raw(const ClassicalPolynomial& g);

}  // namespace gsw::algebra
