#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "gsw/expression.hpp"
#include "gsw/fock.hpp"
#include "gsw/lattice.hpp"
#include "gsw/pmap.hpp"
#include "gsw/spectral.hpp"
#include "physics.hpp"
#include "random_polynomials.hpp"

using namespace gsw;
using fock::FockBasis;

namespace {

pmap::WeightedEnsemble random_ensemble(oracle::Rng& rng, std::size_t modes, double radius, std::size_t max_members) {
  std::uniform_int_distribution<std::size_t> size(1, max_members);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  pmap::WeightedEnsemble e;
  const std::size_t n = size(rng);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e.members.push_back({u(rng), oracle::random_state(rng, modes, radius)});
    total += e.members.back().weight;
  }
  for (auto& m : e.members) m.weight /= total;
  return e;
}

}  // namespace

TEST(FockProperty, build_matrix_is_linear) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t modes = 1 + trial % 2;
    const auto p = oracle::random_operator(rng, modes, 4);
    const auto q = oracle::random_operator(rng, modes, 4);
    const FockBasis basis = FockBasis::uniform(modes, 6);
    const auto sum = fock::build_matrix(p + q, basis).entries;
    const auto parts = (fock::build_matrix(p, basis).entries + fock::build_matrix(q, basis).entries).eval();
    // Equal up to rounding of merged coefficients times the same amplitude.
    const double scale = 1.0 + sum.cwiseAbs().maxCoeff();
    EXPECT_LE((sum - parts).cwiseAbs().maxCoeff(), 8.0 * std::numeric_limits<double>::epsilon() * scale);
  }
}

TEST(FockProperty, products_on_low_occupations_are_cutoff_independent) {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = oracle::random_operator(rng, 1, 4);
    const auto q = oracle::random_operator(rng, 1, 4);
    const unsigned d = std::max(p.degree(), q.degree());
    const auto m12 = (fock::build_matrix(p, FockBasis({12})).entries * fock::build_matrix(q, FockBasis({12})).entries).eval();
    const auto m16 = (fock::build_matrix(p, FockBasis({16})).entries * fock::build_matrix(q, FockBasis({16})).entries).eval();
    const Eigen::Index keep = 12 - d + 1;
    EXPECT_LE((m12.topLeftCorner(keep, keep) - m16.topLeftCorner(keep, keep)).cwiseAbs().maxCoeff(), 1e-9) << trial;
  }
}

TEST(FockProperty, coherent_overlap_law) {
  oracle::Rng rng(13);
  const FockBasis basis = FockBasis::uniform(1, 24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_state(rng, 1, 2.0);
    const auto b = oracle::random_state(rng, 1, 2.0);
    const auto va = fock::coherent_state(a, basis, 1e-4);
    const auto vb = fock::coherent_state(b, basis, 1e-4);
    const double overlap = std::norm(vb.components.dot(va.components));
    EXPECT_NEAR(overlap, std::exp(-std::norm(a.amplitudes[0] - b.amplitudes[0])), 1e-8);
  }
}

TEST(FockProperty, ensemble_densities_are_positive_with_unit_trace) {
  oracle::Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t modes = 1 + trial % 2;
    const auto e = random_ensemble(rng, modes, 1.2, 8);
    const auto basis = fock::adequate_basis(e.states(), 0);
    const auto rho = pmap::rho_of_ensemble(e, basis);
    EXPECT_LE(fock::hermitian_defect(rho.entries), 1e-10);
    EXPECT_NEAR(rho.entries.trace().real(), 1.0, 1e-9);
    const auto eig = fock::hermitian_eigen(rho);
    EXPECT_GE(eig.eigenvalues.front(), -1e-9);
  }
}

TEST(PmapProperty, trace_theorem_for_random_real_functions) {
  oracle::Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t modes = 1 + trial % 2;
    const auto g = oracle::random_real_classical(rng, modes, 4);
    const auto e = random_ensemble(rng, modes, 1.5, 8);
    const auto basis = fock::adequate_basis(e.states(), g.degree());
    const auto r = pmap::trace_theorem_check(g, e, basis);
    EXPECT_LE(r.residual, 1e-6) << g.to_string();
    EXPECT_LE(r.truncation_bound_used, 1e-10);
  }
}

TEST(PmapProperty, mixture_residual_bounded_by_member_residuals) {
  oracle::Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_real_classical(rng, 1, 4);
    const auto e = random_ensemble(rng, 1, 1.5, 6);
    const auto basis = fock::adequate_basis(e.states(), g.degree());
    const double mixed = pmap::trace_theorem_check(g, e, basis).residual;
    double bound = 0.0;
    for (const auto& m : e.members) bound += m.weight * pmap::trace_theorem_check(g, pmap::point_ensemble(m.state), basis).residual;
    EXPECT_LE(mixed, bound + 1e-14);
  }
}

TEST(PmapProperty, harmonic_energy_trace) {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = 0.5 + 0.1 * trial;
    const auto names = algebra::default_mode_names(1);
    const auto h = algebra::parse_classical("conj(al0)*al0", names) * Scalar::from_double(w);
    const auto e = random_ensemble(rng, 1, 1.5, 8);
    const auto r = pmap::trace_theorem_check(h, e, fock::adequate_basis(e.states(), 2));
    double expected = 0.0;
    for (const auto& m : e.members) expected += m.weight * w * std::norm(m.state.amplitudes[0]);
    EXPECT_NEAR(r.quantum_trace.real(), expected, 1e-8);
  }
}

TEST(SpectralProperty, delta_identity_for_random_real_functions) {
  oracle::Rng rng(18);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = oracle::random_real_classical(rng, 1 + trial % 2, 4, 3);
    const auto delta = spectral::delta_operator(h);
    for (double energy : {0.0, 0.75, 3.0}) EXPECT_EQ(spectral::compare_with_square(h, energy), delta);
    EXPECT_TRUE(spectral::build_M(h, 1.25).is_hermitian());
  }
}

TEST(SpectralProperty, point_mass_trace_is_squared_energy_deviation) {
  oracle::Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t modes = 1 + trial % 2;
    const auto h = oracle::random_real_classical(rng, modes, 2, 3);
    const auto s = oracle::random_state(rng, modes, 1.2);
    const double energy = 0.5 + 0.05 * trial;
    const auto m = spectral::build_M(h, energy);
    const auto basis = fock::adequate_basis(std::vector{s}, m.degree());
    const auto value = fock::trace_product(fock::build_matrix(m, basis), pmap::rho_of_state(s, basis)).real();
    const double dev = h.evaluate(s.amplitudes).real() - energy;
    EXPECT_NEAR(value, dev * dev, 1e-7 * std::max(1.0, dev * dev));
  }
}

TEST(SpectralProperty, level_set_ensembles_annihilate_spectral_operator) {
  const auto names1 = algebra::default_mode_names(1);
  const auto names2 = algebra::default_mode_names(2);
  const std::vector<algebra::ClassicalPolynomial> hs{
      algebra::parse_classical("conj(al0)*al0", names1),
      algebra::parse_classical("conj(al0)*al0 + 2*conj(al1)*al1", names2),
      algebra::parse_classical("conj(al0)*al0 + 0.1*(al0 + conj(al0))^4", names1),
      algebra::parse_classical("conj(al0)*al0 + 1.5*conj(al1)*al1 + 0.1*(al0*conj(al1) + conj(al0)*al1)", names2)};
  std::uint64_t seed = 1;
  for (const auto& h : hs) {
    for (double energy : {0.5, 1.0, 2.0}) {
      const auto e = spectral::level_set_ensemble(h, energy, 12, seed++);
      const auto basis = fock::adequate_basis(e.states(), 4);
      const auto r = spectral::analyze(h, energy, &e, basis);
      EXPECT_LE(std::abs(*r.ensemble_residual), 1e-7) << h.to_string() << " E=" << energy;
    }
  }
}

TEST(LatticeProperty, energy_consistency_for_random_configurations) {
  oracle::Rng rng(20);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t d : {1, 2, 3, 4}) {
    for (double lambda : {0.0, 0.1, -0.05}) {
      lattice::LatticeModel model;
      model.sites = d;
      model.spacing = 0.8;
      model.masses = {1.1};
      model.interaction = algebra::PhasePolynomial(1);
      algebra::PhaseKey quartic{4, 0};
      model.interaction.add_term(quartic, Scalar::from_double(lambda));
      const auto h = lattice::classical_hamiltonian(model);
      for (int i = 0; i < 20; ++i) {
        lattice::FieldConfiguration cfg;
        for (std::size_t x = 0; x < d; ++x) {
          cfg.phi.push_back(u(rng));
          cfg.pi.push_back(u(rng));
        }
        const double direct = oracle::lattice_energy(cfg.phi, cfg.pi, 0.8, 1.1,
                                                     [&](double phi, double) { return lambda * std::pow(phi, 4); });
        EXPECT_NEAR(h.evaluate(lattice::mode_variables(cfg, model).amplitudes).real(), direct, 1e-10);
      }
    }
  }
}

TEST(LatticeProperty, two_field_energy_consistency) {
  oracle::Rng rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  lattice::LatticeModel model;
  model.sites = 2;
  model.spacing = 1.0;
  model.masses = {1.0, 2.0};
  const auto names = algebra::default_mode_names(2);
  model.interaction = algebra::parse_phase("0.1*phi0^2*phi1^2 + 0.05*pi0*pi1", names);
  const auto h = lattice::classical_hamiltonian(model);
  for (int i = 0; i < 20; ++i) {
    lattice::FieldConfiguration cfg;
    for (int k = 0; k < 4; ++k) {
      cfg.phi.push_back(u(rng));
      cfg.pi.push_back(u(rng));
    }
    double direct = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      const std::vector<double> phi(cfg.phi.begin() + 2 * j, cfg.phi.begin() + 2 * j + 2);
      const std::vector<double> pi(cfg.pi.begin() + 2 * j, cfg.pi.begin() + 2 * j + 2);
      direct += oracle::lattice_energy(phi, pi, 1.0, model.masses[j], [](double, double) { return 0.0; });
    }
    for (std::size_t x = 0; x < 2; ++x)
      direct += 0.1 * std::pow(cfg.phi[x] * cfg.phi[2 + x], 2) + 0.05 * cfg.pi[x] * cfg.pi[2 + x];
    EXPECT_NEAR(h.evaluate(lattice::mode_variables(cfg, model).amplitudes).real(), direct, 1e-10);
  }
}

TEST(LatticeProperty, generalized_trace_theorem) {
  oracle::Rng rng(22);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (std::size_t d : {1, 2}) {
    for (double lambda : {0.1, -0.1, 0.05}) {
      lattice::LatticeModel model;
      model.sites = d;
      model.masses = {1.0};
      model.interaction = algebra::PhasePolynomial(1);
      model.interaction.add_term(algebra::PhaseKey{4, 0}, Scalar::from_double(lambda));
      const auto h = lattice::classical_hamiltonian(model);
      for (int i = 0; i < 5; ++i) {
        lattice::FieldConfiguration cfg;
        for (std::size_t x = 0; x < d; ++x) {
          cfg.phi.push_back(u(rng));
          cfg.pi.push_back(u(rng));
        }
        const auto s = lattice::mode_variables(cfg, model);
        const auto r = pmap::trace_theorem_check(h, pmap::point_ensemble(s), fock::adequate_basis(std::vector{s}, 4));
        EXPECT_LE(r.residual, 1e-6);
      }
    }
  }
}

TEST(LatticeProperty, free_spectrum_is_sum_of_mode_quanta) {
  lattice::LatticeModel model;
  model.sites = 2;
  model.masses = {1.0};
  const lattice::ModeTransform t(model);
  const FockBasis basis = FockBasis::uniform(2, 6);
  const auto eig = fock::hermitian_eigen(fock::build_matrix(lattice::normal_hamiltonian(model), basis));
  std::vector<double> expected;
  for (unsigned n0 = 0; n0 <= 6; ++n0)
    for (unsigned n1 = 0; n1 <= 6; ++n1) expected.push_back(n0 * t.frequency(0) + n1 * t.frequency(1));
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(eig.eigenvalues.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(eig.eigenvalues[i], expected[i], 1e-10);
}
