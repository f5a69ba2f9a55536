#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gsw {

/// Classical state: one complex amplitude alpha_j per mode.
struct ClassicalState {
  std::vector<std::complex<double>> amplitudes;

  ClassicalState() = default;
  explicit ClassicalState(std::vector<std::complex<double>> a) : amplitudes(std::move(a)) {}
  ClassicalState(std::initializer_list<std::complex<double>> a) : amplitudes(a) {}

  std::size_t number_of_modes() const noexcept { return amplitudes.size(); }
  std::span<const std::complex<double>> view() const noexcept { return amplitudes; }
};

}  // namespace gsw
