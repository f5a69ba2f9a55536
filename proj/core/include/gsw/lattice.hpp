#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/phase_polynomial.hpp"
#include "gsw/state.hpp"

namespace gsw::lattice {

using algebra::ClassicalPolynomial;
using algebra::OperatorPolynomial;
using algebra::PhasePolynomial;

/// Periodic 1-D lattice of `sites` points carrying masses.size() real fields.
///
/// H = spacing * sum_x [ 1/2 sum_j (pi_j^2 + (grad phi_j)^2 + m_j^2 phi_j^2) + f(phi(x), pi(x)) ]
///
/// with forward differences grad phi(x) = (phi(x+1) - phi(x)) / spacing. The
/// interaction f is a local density in phi0..phi{n-1}, pi0..pi{n-1}.
struct LatticeModel {
  std::size_t sites = 1;
  double spacing = 1.0;
  std::vector<double> masses{1.0};
  PhasePolynomial interaction{1};

  std::size_t field_count() const noexcept { return masses.size(); }
  std::size_t number_of_modes() const noexcept { return masses.size() * sites; }
  /// Throws PreconditionError on sites == 0, spacing <= 0, masses <= 0, a
  /// mismatched interaction or an interaction of degree > 4.
  void validate() const;
};

/// Field values, index j * sites + x.
struct FieldConfiguration {
  std::vector<double> phi;
  std::vector<double> pi;
};

/// Real orthonormal Fourier basis and per-mode frequencies. Basis function b
/// is cos/sin of wave number k(b) (b = 0 constant, b = d/2 alternating for
/// even d); mode index is j * sites + b.
class ModeTransform {
 public:
  explicit ModeTransform(const LatticeModel& model);

  std::size_t sites() const noexcept { return sites_; }
  /// Wave number k(b) in 0..d/2.
  unsigned wave_number(std::size_t b) const { return wave_[b]; }
  /// 2 |sin(pi k / d)| / spacing.
  double lattice_momentum(std::size_t b) const;
  /// sqrt(m_j^2 + p^2) for mode j * sites + b.
  double frequency(std::size_t mode) const { return frequencies_[mode]; }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  /// Rows are basis functions, columns sites; orthogonal.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

  ClassicalState forward(const FieldConfiguration& cfg) const;
  FieldConfiguration inverse(const ClassicalState& s) const;

  /// phi_j(x) and pi_j(x) as linear polynomials in the mode amplitudes.
  ClassicalPolynomial field_polynomial(std::size_t field, std::size_t site) const;
  ClassicalPolynomial momentum_polynomial(std::size_t field, std::size_t site) const;

 private:
  std::size_t sites_;
  std::size_t fields_;
  double spacing_;
  std::vector<unsigned> wave_;
  std::vector<double> frequencies_;
  Eigen::MatrixXd basis_;
};

/// alpha = sqrt(spacing) (sqrt(w/2) phi_hat + i pi_hat / sqrt(2 w)), so the
/// free part of H is exactly sum w |alpha|^2.
ClassicalState mode_variables(const FieldConfiguration& cfg, const LatticeModel& model);
FieldConfiguration field_configuration(const ClassicalState& s, const LatticeModel& model);

/// H in mode amplitudes: sum w conj(al) al + the interaction substituted.
ClassicalPolynomial classical_hamiltonian(const LatticeModel& model);
/// normal_product(classical_hamiltonian(model)).
OperatorPolynomial normal_hamiltonian(const LatticeModel& model);
/// H in real lattice variables; degree of freedom j * sites + x.
PhasePolynomial real_space_hamiltonian(const LatticeModel& model);

/// Model file plus the per-mode cutoff it requests (empty when absent).
struct ModelFile {
  LatticeModel model;
  std::vector<unsigned> cutoffs;
};

// "key = value" lines, '#' comments. Keys: sites, spacing, masses (comma or
// space separated), interaction (expression in phiJ, piJ), cutoff (one value
// or one per mode).
ModelFile parse_model(std::istream& in);
ModelFile parse_model_text(std::string_view text);

}  // namespace gsw::lattice
