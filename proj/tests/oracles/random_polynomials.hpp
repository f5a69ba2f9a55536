#pragma once

// Seeded random generators for property tests.

#include <complex>
#include <random>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/ordering.hpp"
#include "gsw/phase_polynomial.hpp"
#include "gsw/state.hpp"

namespace oracle {

using Rng = std::mt19937_64;

inline gsw::Scalar random_coefficient(Rng& rng) {
  std::uniform_int_distribution<int> n(-8, 8);
  int re = n(rng);
  int im = n(rng);
  if (re == 0 && im == 0) re = 1;
  return gsw::Scalar::gaussian({re, 4}, {im, 4});
}

inline gsw::Scalar random_real_coefficient(Rng& rng) {
  std::uniform_int_distribution<int> n(-8, 8);
  int v = n(rng);
  if (v == 0) v = 3;
  return gsw::Scalar::rational(v, 4);
}

/// Random exponent key of total degree <= max_degree.
inline gsw::algebra::MonomialKey random_key(Rng& rng, std::size_t modes, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> mode(0, modes - 1);
  std::bernoulli_distribution raise(0.5);
  gsw::algebra::MonomialKey key(modes);
  const unsigned d = deg(rng);
  for (unsigned i = 0; i < d; ++i) {
    auto& e = key[mode(rng)];
    if (raise(rng)) ++e.raised;
    else ++e.lowered;
  }
  return key;
}

inline gsw::algebra::OperatorPolynomial random_operator(Rng& rng, std::size_t modes, unsigned max_degree,
                                                        unsigned terms = 4) {
  gsw::algebra::OperatorPolynomial p(modes);
  for (unsigned t = 0; t < terms; ++t) p.add_term(random_key(rng, modes, max_degree), random_coefficient(rng));
  return p;
}

/// Real-valued classical polynomial: every term is paired with its conjugate.
inline gsw::algebra::ClassicalPolynomial random_real_classical(Rng& rng, std::size_t modes, unsigned max_degree,
                                                               unsigned terms = 4) {
  gsw::algebra::ClassicalPolynomial g(modes);
  for (unsigned t = 0; t < terms; ++t) {
    auto key = random_key(rng, modes, max_degree);
    auto swapped = key;
    for (auto& e : swapped) std::swap(e.raised, e.lowered);
    const gsw::Scalar c = random_coefficient(rng);
    g.add_term(key, c);
    g.add_term(swapped, c.conj());
  }
  return g;
}

/// Random phase-space polynomial with real coefficients.
inline gsw::algebra::PhasePolynomial random_phase(Rng& rng, std::size_t dof, unsigned max_degree, unsigned terms = 5) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, 2 * dof - 1);
  gsw::algebra::PhasePolynomial h(dof);
  for (unsigned t = 0; t < terms; ++t) {
    gsw::algebra::PhaseKey key(2 * dof, 0);
    const unsigned d = deg(rng);
    for (unsigned i = 0; i < d; ++i) ++key[var(rng)];
    h.add_term(key, random_real_coefficient(rng));
  }
  return h;
}

inline gsw::algebra::OperatorWord random_word(Rng& rng, std::size_t modes, unsigned max_length) {
  std::uniform_int_distribution<unsigned> len(0, max_length);
  std::uniform_int_distribution<std::uint32_t> mode(0, static_cast<std::uint32_t>(modes - 1));
  std::bernoulli_distribution creation(0.5);
  gsw::algebra::OperatorWord w(len(rng));
  for (auto& f : w) f = {mode(rng), creation(rng)};
  return w;
}

/// Amplitudes uniform in the disc of radius r per mode.
inline gsw::ClassicalState random_state(Rng& rng, std::size_t modes, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::complex<double>> a(modes);
  for (auto& z : a) z = std::polar(r * std::sqrt(u(rng)), 2.0 * 3.141592653589793 * u(rng));
  return gsw::ClassicalState(a);
}

}  // namespace oracle
