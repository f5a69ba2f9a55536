#include <benchmark/benchmark.h>

#include "gsw/dynamics.hpp"
#include "gsw/fock.hpp"
#include "gsw/ordering.hpp"
#include "gsw/spectral.hpp"

namespace {

using gsw::algebra::ClassicalPolynomial;
using gsw::algebra::OperatorPolynomial;

OperatorPolynomial number_sum(std::size_t modes) {
  OperatorPolynomial n(modes);
  for (std::size_t j = 0; j < modes; ++j) n += gsw::algebra::multiply(OperatorPolynomial::creation(modes, j), OperatorPolynomial::annihilation(modes, j));
  return n;
}

void BM_Multiply(benchmark::State& state) {
  const auto modes = static_cast<std::size_t>(state.range(0));
  const auto p = gsw::algebra::pow(number_sum(modes) + OperatorPolynomial::creation(modes, 0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gsw::algebra::multiply(p, p));
}
BENCHMARK(BM_Multiply)->Arg(1)->Arg(2)->Arg(3);

void BM_BuildMatrix(benchmark::State& state) {
  const auto cutoff = static_cast<unsigned>(state.range(0));
  ClassicalPolynomial h = ClassicalPolynomial::conj_alpha(2, 0) * ClassicalPolynomial::alpha(2, 0) +
                          ClassicalPolynomial::conj_alpha(2, 1) * ClassicalPolynomial::alpha(2, 1);
  const auto m = gsw::spectral::build_M(h, 2.0);
  const auto basis = gsw::fock::FockBasis::uniform(2, cutoff);
  for (auto _ : state) benchmark::DoNotOptimize(gsw::fock::build_matrix(m, basis));
}
BENCHMARK(BM_BuildMatrix)->Arg(8)->Arg(16)->Arg(24);

void BM_HermitianEigen(benchmark::State& state) {
  const auto cutoff = static_cast<unsigned>(state.range(0));
  const auto basis = gsw::fock::FockBasis::uniform(2, cutoff);
  const auto m = gsw::fock::build_matrix(gsw::algebra::pow(number_sum(2) + OperatorPolynomial::creation(2, 0) + OperatorPolynomial::annihilation(2, 0), 2), basis);
  for (auto _ : state) benchmark::DoNotOptimize(gsw::fock::hermitian_eigen(m));
}
BENCHMARK(BM_HermitianEigen)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const auto sys = gsw::dynamics::OdeSystem::hamiltonian(gsw::dynamics::quartic_oscillator(0.1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsw::dynamics::evolve_point(sys, {{1.0}, {0.0}}, 10.0, 1e-3));
  }
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
