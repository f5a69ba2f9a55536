#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace gsw::algebra {

/// Per-mode pair of powers. For ladder monomials `raised` is the power of
/// a_j^dagger and `lowered` the power of a_j; for classical monomials they are
/// the powers of conj(alpha_j) and alpha_j. This shared layout makes the
/// normal-product map a key-preserving relabelling.
struct ModeExponent {
  std::uint32_t raised = 0;
  std::uint32_t lowered = 0;

  auto operator<=>(const ModeExponent&) const = default;
};

/// One ModeExponent per mode. Ordered lexicographically by (mode, raised, lowered).
using MonomialKey = std::vector<ModeExponent>;

inline unsigned total_degree(const MonomialKey& key) {
  unsigned d = 0;
  for (const auto& e : key) d += e.raised + e.lowered;
  return d;
}

/// Default symbol labels "0", "1", ... for `count` modes.
std::vector<std::string> default_mode_names(std::size_t count);

}  // namespace gsw::algebra
