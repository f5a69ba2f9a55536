#include "gsw/spectral.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gsw/error.hpp"
#include "gsw/ordering.hpp"

namespace gsw::spectral {
namespace {

void require_real(const ClassicalPolynomial& h) {
  if (!h.is_real_valued()) throw PreconditionError("h must be real-valued (conjugate-symmetric)");
}

ClassicalPolynomial shifted(const ClassicalPolynomial& h, double energy) {
  return h - ClassicalPolynomial::constant(h.number_of_modes(), Scalar::from_double(energy));
}

}  // namespace

OperatorPolynomial build_M(const ClassicalPolynomial& h, double energy) {
  require_real(h);
  const auto d = shifted(h, energy);
  return algebra::normal_product(d * d);
}

OperatorPolynomial delta_operator(const ClassicalPolynomial& h) {
  require_real(h);
  const auto hn = algebra::normal_product(h);
  return algebra::normal_product(h * h) - algebra::multiply(hn, hn);
}

OperatorPolynomial compare_with_square(const ClassicalPolynomial& h, double energy) {
  const auto m = build_M(h, energy);
  const auto d = algebra::normal_product(shifted(h, energy));
  return m - algebra::multiply(d, d);
}

double default_zero_tolerance(std::span<const double> eigenvalues) {
  double radius = 0.0;
  for (double v : eigenvalues) radius = std::max(radius, std::abs(v));
  return 1e-8 * (1.0 + radius);
}

fock::Matrix zero_eigenspace(const fock::EigenDecomposition& eig, double tol) {
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) <= tol) keep.push_back(static_cast<Eigen::Index>(i));
  }
  fock::Matrix z(eig.eigenvectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) z.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors.col(keep[c]);
  return z;
}

fock::Matrix zero_eigenspace(const FockMatrix& m, double tol) { return zero_eigenspace(fock::hermitian_eigen(m), tol); }

std::vector<FockVector> zero_eigenvectors(const FockMatrix& m, double tol) {
  const auto z = zero_eigenspace(m, tol);
  std::vector<FockVector> out;
  for (Eigen::Index c = 0; c < z.cols(); ++c) out.push_back(FockVector{m.basis, z.col(c)});
  return out;
}

SpectralReport analyze(const ClassicalPolynomial& h, double energy, const pmap::WeightedEnsemble* ensemble,
                       const FockBasis& basis, std::optional<double> tol) {
  if (!(energy >= 0.0)) throw PreconditionError("energy must be nonnegative");
  if (ensemble) {
    ensemble->validate();
    for (std::size_t i = 0; i < ensemble->size(); ++i) {
      const auto value = h.evaluate(ensemble->members[i].state.view());
      if (std::abs(value - energy) > kDefiniteEnergyTolerance) {
        throw PreconditionError(fmt::format("ensemble member {} has energy {:.12g}, not {:.12g}", i, value.real(), energy));
      }
    }
  }
  const auto m = fock::build_matrix(build_M(h, energy), basis);
  const auto eig = fock::hermitian_eigen(m);

  SpectralReport r;
  r.energy = energy;
  r.eigenvalues = eig.eigenvalues;
  r.zero_tolerance = tol.value_or(default_zero_tolerance(eig.eigenvalues));
  r.zero_vectors = zero_eigenspace(eig, r.zero_tolerance);
  r.zero_space_dimension = static_cast<std::size_t>(r.zero_vectors.cols());
  r.min_eigenvalue = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
  if (ensemble) {
    const auto rho = pmap::rho_of_ensemble(*ensemble, basis);
    r.ensemble_residual = fock::trace_product(m, rho).real();
    // (I - P0) rho (I - P0) is PSD, so its trace norm is its trace.
    const double inside = (r.zero_vectors.adjoint() * rho.entries * r.zero_vectors).trace().real();
    r.ensemble_projection_deficit = std::max(0.0, rho.entries.trace().real() - inside);
  }
  return r;
}

std::optional<std::vector<double>> free_frequencies(const ClassicalPolynomial& h) {
  std::vector<double> w(h.number_of_modes(), 0.0);
  for (const auto& [key, c] : h.terms()) {
    std::size_t active = 0;
    std::size_t mode = 0;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j].raised || key[j].lowered) {
        ++active;
        mode = j;
      }
    }
    if (active != 1 || key[mode].raised != 1 || key[mode].lowered != 1 || !c.is_real() || !(c.real() > 0.0)) {
      return std::nullopt;
    }
    w[mode] = c.real();
  }
  if (std::any_of(w.begin(), w.end(), [](double x) { return x <= 0.0; })) return std::nullopt;
  return w;
}

pmap::WeightedEnsemble level_set_ensemble(const ClassicalPolynomial& h, double energy, std::size_t count,
                                          std::uint64_t seed) {
  require_real(h);
  if (count == 0) throw PreconditionError("level-set ensemble needs count >= 1");
  const std::size_t n = h.number_of_modes();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ClassicalState> states;

  if (const auto w = free_frequencies(h)) {
    if (energy < 0.0) throw PreconditionError("free level set needs E >= 0");
    std::exponential_distribution<double> expo(1.0);
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<double> share(n);
      double total = 0.0;
      for (auto& x : share) total += (x = expo(rng));
      std::vector<std::complex<double>> a(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double action = energy * share[j] / total / (*w)[j];
        a[j] = std::polar(std::sqrt(action), 2.0 * std::numbers::pi * unit(rng));
      }
      states.emplace_back(std::move(a));
    }
    return pmap::WeightedEnsemble::uniform(std::move(states));
  }

  std::vector<ClassicalPolynomial> grad;
  for (std::size_t j = 0; j < n; ++j) grad.push_back(h.derivative_conj(j));
  std::normal_distribution<double> gauss(0.0, std::sqrt(std::max(energy, 1.0) / static_cast<double>(n)));
  constexpr int kAttempts = 200;
  constexpr int kIterations = 100;
  for (std::size_t s = 0; s < count; ++s) {
    bool found = false;
    for (int attempt = 0; attempt < kAttempts && !found; ++attempt) {
      std::vector<std::complex<double>> a(n);
      for (auto& z : a) z = {gauss(rng), gauss(rng)};
      for (int it = 0; it < kIterations; ++it) {
        const double f = h.evaluate(a).real() - energy;
        if (std::abs(f) <= 1e-10) {
          found = true;
          break;
        }
        // Real gradient of h in (Re, Im) coordinates is 2 dh/dconj(al).
        std::vector<std::complex<double>> g(n);
        double g2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          g[j] = 2.0 * grad[j].evaluate(a);
          g2 += std::norm(g[j]);
        }
        if (!(g2 > 1e-300) || !std::isfinite(f)) break;
        for (std::size_t j = 0; j < n; ++j) a[j] -= (f / g2) * g[j];
      }
      if (found) states.emplace_back(std::move(a));
    }
    if (!found) throw PreconditionError(fmt::format("could not reach the level set h = {:.12g}", energy));
  }
  return pmap::WeightedEnsemble::uniform(std::move(states));
}

double span_minimum(const FockMatrix& m, std::span<const FockVector> states) {
  if (states.empty()) throw PreconditionError("span_minimum needs at least one state");
  fock::Matrix v(m.entries.rows(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = states[i].components;
  const fock::Matrix gram = v.adjoint() * v;
  Eigen::SelfAdjointEigenSolver<fock::Matrix> g(gram);
  const auto& lam = g.eigenvalues();
  const double cut = 1e-12 * lam.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cut) keep.push_back(i);
  fock::Matrix w(gram.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) = g.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));
  const fock::Matrix basis = v * w;
  fock::Matrix reduced = basis.adjoint() * m.entries * basis;
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<fock::Matrix> r(reduced, Eigen::EigenvaluesOnly);
  return r.eigenvalues()(0);
}

double mixture_minimum(const FockMatrix& m, std::span<const FockVector> states) {
  if (states.empty()) throw PreconditionError("mixture_minimum needs at least one state");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : states) best = std::min(best, fock::expectation(m, s).real());
  return best;
}

}  // namespace gsw::spectral
