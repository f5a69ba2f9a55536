#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gsw/scalar.hpp"

namespace gsw::detail {

/// Joins (coefficient, monomial-text) pairs as "m1 + 2*m2 - m3 + 1".
inline std::string join_terms(const std::vector<std::pair<Scalar, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, mono] : terms) {
    Scalar magnitude = c;
    bool negative = false;
    if (c.is_real() && c.real() < 0) {
      negative = true;
      magnitude = -c;
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string coeff = magnitude.to_string();
    if (mono.empty()) {
      out += coeff;
    } else if (coeff == "1") {
      out += mono;
    } else {
      out += coeff + "*" + mono;
    }
  }
  return out;
}

inline std::string power_text(const std::string& symbol, unsigned power) {
  if (power == 1) return symbol;
  return symbol + "^" + std::to_string(power);
}

}  // namespace gsw::detail
