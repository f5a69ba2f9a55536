#include <gtest/gtest.h>

#include <random>

#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "gsw/fock.hpp"
#include "gsw/lattice.hpp"
#include "gsw/pmap.hpp"
#include "physics.hpp"

using namespace gsw;
using namespace gsw::lattice;

namespace {

LatticeModel model(std::size_t sites, double spacing, double mass, const std::string& interaction = "0") {
  LatticeModel m;
  m.sites = sites;
  m.spacing = spacing;
  m.masses = {mass};
  const auto names = algebra::default_mode_names(1);
  m.interaction = algebra::parse_phase(interaction, names);
  return m;
}

FieldConfiguration random_configuration(std::size_t sites, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  FieldConfiguration cfg;
  for (std::size_t x = 0; x < sites; ++x) {
    cfg.phi.push_back(u(rng));
    cfg.pi.push_back(u(rng));
  }
  return cfg;
}

}  // namespace

TEST(ModeVariables, zero_fields_give_zero_amplitudes) {
  const auto m = model(3, 1.0, 1.0);
  const auto s = mode_variables({{0, 0, 0}, {0, 0, 0}}, m);
  for (auto a : s.amplitudes) EXPECT_EQ(a, std::complex<double>(0.0, 0.0));
}

TEST(ModeVariables, single_site_scaling) {
  const auto m = model(1, 1.0, 1.0);
  const double x = 0.37;
  const auto s = mode_variables({{std::sqrt(2.0) * x}, {0.0}}, m);
  ASSERT_EQ(s.number_of_modes(), 1U);
  EXPECT_NEAR(s.amplitudes[0].real(), x, 1e-15);
  EXPECT_NEAR(s.amplitudes[0].imag(), 0.0, 1e-15);
}

TEST(ModeVariables, round_trip_reproduces_configuration) {
  std::mt19937_64 rng(3);
  for (std::size_t d : {1, 2, 3, 4, 5}) {
    const auto m = model(d, 0.7, 1.3);
    const auto cfg = random_configuration(d, rng);
    const auto back = field_configuration(mode_variables(cfg, m), m);
    for (std::size_t x = 0; x < d; ++x) {
      EXPECT_NEAR(back.phi[x], cfg.phi[x], 1e-12);
      EXPECT_NEAR(back.pi[x], cfg.pi[x], 1e-12);
    }
  }
}

TEST(ModeVariables, shape_mismatch_is_rejected) {
  EXPECT_THROW(mode_variables({{0.0}, {0.0, 1.0}}, model(2, 1.0, 1.0)), ShapeError);
}

TEST(ModeTransform, basis_is_orthogonal) {
  for (std::size_t d : {1, 2, 3, 4, 6}) {
    const ModeTransform t(model(d, 1.0, 1.0));
    const Eigen::MatrixXd b = t.basis();
    EXPECT_LE((b * b.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ModeTransform, two_site_dispersion) {
  const ModeTransform t(model(2, 1.0, 1.0));
  EXPECT_DOUBLE_EQ(t.frequency(0), 1.0);
  EXPECT_NEAR(t.lattice_momentum(1), 2.0, 1e-15);
  EXPECT_NEAR(t.frequency(1), std::sqrt(5.0), 1e-15);
}

TEST(ClassicalHamiltonian, single_site_free_field_is_number_function) {
  const auto names = algebra::default_mode_names(1);
  EXPECT_EQ(classical_hamiltonian(model(1, 1.0, 1.0)), algebra::parse_classical("conj(al0)*al0", names));
}

TEST(ClassicalHamiltonian, two_site_free_field_matches_real_space_sum) {
  const auto m = model(2, 1.0, 1.0);
  const auto h = classical_hamiltonian(m);
  const auto names = algebra::default_mode_names(2);
  const auto expected = algebra::parse_classical("conj(al0)*al0", names) +
                        algebra::parse_classical("conj(al1)*al1", names) * Scalar::from_double(std::sqrt(5.0));
  EXPECT_TRUE(h.approx_equal(expected, 1e-14));
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto cfg = random_configuration(2, rng);
    const double direct = oracle::lattice_energy(cfg.phi, cfg.pi, 1.0, 1.0, [](double, double) { return 0.0; });
    EXPECT_NEAR(h.evaluate(mode_variables(cfg, m).amplitudes).real(), direct, 1e-10);
  }
}

TEST(ClassicalHamiltonian, single_site_quartic_scaling) {
  const double lambda = 0.1;
  const auto m = model(1, 1.0, 1.5, "0.1*phi0^4");
  const auto names = algebra::default_mode_names(1);
  const double w = 1.5;
  const auto expected = algebra::parse_classical("conj(al0)*al0", names) * Scalar::from_double(w) +
                        algebra::pow(algebra::parse_classical("al0 + conj(al0)", names), 4) *
                            Scalar::from_double(lambda / (4.0 * w * w));
  EXPECT_TRUE(classical_hamiltonian(m).approx_equal(expected, 1e-14));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto cfg = random_configuration(1, rng);
    const double direct = oracle::lattice_energy(cfg.phi, cfg.pi, 1.0, 1.5,
                                                 [&](double phi, double) { return lambda * std::pow(phi, 4); });
    EXPECT_NEAR(classical_hamiltonian(m).evaluate(mode_variables(cfg, m).amplitudes).real(), direct, 1e-10);
  }
}

TEST(NormalHamiltonian, single_site_free_field_is_number_operator) {
  const auto names = algebra::default_mode_names(1);
  EXPECT_EQ(normal_hamiltonian(model(1, 1.0, 1.0)), algebra::parse_operator("ad0*a0", names));
}

TEST(NormalHamiltonian, trace_matches_classical_energy) {
  const auto m = model(2, 1.0, 1.0, "0.1*phi0^4");
  const auto h = classical_hamiltonian(m);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    const auto cfg = random_configuration(2, rng, 0.8);
    const auto s = mode_variables(cfg, m);
    const auto r = pmap::trace_theorem_check(h, pmap::point_ensemble(s), fock::adequate_basis(std::vector{s}, 4));
    EXPECT_LE(r.residual, 1e-6);
  }
}

TEST(NormalHamiltonian, vacuum_energy_is_zero_for_free_field) {
  const auto m = model(2, 1.0, 1.0);
  const fock::FockBasis basis = fock::FockBasis::uniform(2, 4);
  const auto hn = fock::build_matrix(normal_hamiltonian(m), basis);
  const auto rho = pmap::rho_of_state(ClassicalState{0.0, 0.0}, basis);
  EXPECT_EQ(fock::trace_product(hn, rho), std::complex<double>(0.0, 0.0));
}

TEST(RealSpaceHamiltonian, agrees_with_direct_sum) {
  const auto m = model(3, 0.5, 1.2, "0.05*phi0^4 + 0.1*phi0^2*pi0^2");
  const auto h = real_space_hamiltonian(m);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto cfg = random_configuration(3, rng);
    const double direct = oracle::lattice_energy(cfg.phi, cfg.pi, 0.5, 1.2, [](double phi, double pi) {
      return 0.05 * std::pow(phi, 4) + 0.1 * phi * phi * pi * pi;
    });
    EXPECT_NEAR(h.evaluate(cfg.phi, cfg.pi), direct, 1e-12);
    EXPECT_NEAR(classical_hamiltonian(m).evaluate(mode_variables(cfg, m).amplitudes).real(), direct, 1e-10);
  }
}

TEST(LatticeModel, validation) {
  auto m = model(2, 1.0, 1.0);
  m.masses = {0.0};
  EXPECT_THROW(m.validate(), PreconditionError);
  m = model(2, 1.0, 1.0, "phi0^5");
  EXPECT_THROW(m.validate(), PreconditionError);
  m = model(2, -1.0, 1.0);
  EXPECT_THROW(m.validate(), PreconditionError);
}

TEST(ParseModel, reads_all_keys) {
  const auto f = parse_model_text(
      "# two-site quartic\n"
      "sites = 2\n"
      "spacing = 0.5\n"
      "masses = 1.5\n"
      "interaction = 0.1*phi0^4\n"
      "cutoff = 10, 12\n");
  EXPECT_EQ(f.model.sites, 2U);
  EXPECT_DOUBLE_EQ(f.model.spacing, 0.5);
  EXPECT_EQ(f.model.masses, (std::vector<double>{1.5}));
  EXPECT_EQ(f.model.interaction.degree(), 4U);
  EXPECT_EQ(f.cutoffs, (std::vector<unsigned>{10, 12}));
}

TEST(ParseModel, unknown_key_is_a_parse_error) { EXPECT_THROW(parse_model_text("colour = red\n"), ParseError); }
