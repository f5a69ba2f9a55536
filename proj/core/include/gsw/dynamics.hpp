#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsw/classical_polynomial.hpp"
#include "gsw/operator_polynomial.hpp"
#include "gsw/phase_polynomial.hpp"

namespace gsw::dynamics {

using algebra::PhasePolynomial;

struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;
};

/// dq/dt and dp/dt written into the output spans.
using VectorField = std::function<void(std::span<const double> q, std::span<const double> p,
                                       std::span<double> dq, std::span<double> dp)>;

/// A flow on (q, p) phase space with n degrees of freedom.
class OdeSystem {
 public:
  enum class Kind { hamiltonian, polynomial_field, callable_field };

  /// dq_i/dt = dH/dp_i, dp_i/dt = -dH/dq_i.
  static OdeSystem hamiltonian(PhasePolynomial h);
  /// General polynomial field; one entry per degree of freedom in each list.
  static OdeSystem polynomial_field(std::vector<PhasePolynomial> q_dot, std::vector<PhasePolynomial> p_dot);
  /// General field given as a callable; divergence falls back to finite differences.
  static OdeSystem callable_field(std::size_t degrees_of_freedom, VectorField field);

  Kind kind() const noexcept { return kind_; }
  bool is_hamiltonian() const noexcept { return kind_ == Kind::hamiltonian; }
  bool is_polynomial() const noexcept { return kind_ != Kind::callable_field; }
  std::size_t degrees_of_freedom() const noexcept { return dof_; }
  /// Throws PreconditionError unless the system is Hamiltonian.
  const PhasePolynomial& hamiltonian_function() const;
  /// Field components (polynomial kinds only).
  const std::vector<PhasePolynomial>& q_dot() const { return q_dot_; }
  const std::vector<PhasePolynomial>& p_dot() const { return p_dot_; }

  void velocity(std::span<const double> q, std::span<const double> p, std::span<double> dq,
                std::span<double> dp) const;
  PhasePoint velocity(const PhasePoint& x) const;

 private:
  OdeSystem() = default;
  void build_evaluators();

  Kind kind_ = Kind::hamiltonian;
  std::size_t dof_ = 0;
  std::optional<PhasePolynomial> h_;
  std::vector<PhasePolynomial> q_dot_;
  std::vector<PhasePolynomial> p_dot_;
  std::vector<algebra::PhaseEvaluator> q_eval_;
  std::vector<algebra::PhaseEvaluator> p_eval_;
  VectorField field_;
};

/// sum_i d(dq_i/dt)/dq_i + d(dp_i/dt)/dp_i as a polynomial; nullopt for callable fields.
std::optional<PhasePolynomial> symbolic_divergence(const OdeSystem& sys);

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Divergence at a point: symbolic when available, else central differences.
/// Throws NumericalError on non-finite field values.
double divergence(const OdeSystem& sys, const PhasePoint& x);

struct IncompressibilityResult {
  bool incompressible = false;
  double max_abs_divergence = 0.0;
  bool symbolic = false;
};

inline constexpr double kIncompressibilityTolerance = 1e-7;

/// Polynomial systems: incompressible iff the symbolic divergence is the zero
/// polynomial. Callable fields: iff max |div| over the samples <= 1e-7.
IncompressibilityResult is_statistically_incompressible(const OdeSystem& sys, std::span<const PhasePoint> samples);

struct FlowEnsemble {
  std::vector<PhasePoint> samples;
  /// Empty means uniform.
  std::vector<double> weights;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return samples.size(); }
  double weight(std::size_t i) const;
};

inline constexpr double kBlowUpThreshold = 1e12;

/// Advance every sample by T in ceil(T/dt) equal steps. Separable Hamiltonians
/// use Stormer-Verlet, non-separable ones the implicit midpoint rule, general
/// fields classical RK4. Throws BlowUpError if a coordinate exceeds 1e12.
FlowEnsemble evolve(const OdeSystem& sys, const FlowEnsemble& e, double T, double dt);
PhasePoint evolve_point(const OdeSystem& sys, PhasePoint x, double T, double dt);

struct BoltzmannOptions {
  unsigned burn_in = 400;
  unsigned thinning = 25;
  unsigned samples_per_chain = 8;
  /// Initial proposal scale; 0 picks 1 / sqrt(k * largest Hessian eigenvalue).
  double initial_step = 0.0;
};

/// Reason exp(-k H) fails to be certifiably normalizable, or nullopt if it is:
/// degree <= 4, positive-definite quadratic part, quartic part >= 0 on probe
/// directions (> 0 when cubic terms are present).
std::optional<std::string> normalizability_issue(const PhasePolynomial& h);

/// Metropolis samples from exp(-k H). Independent chains of
/// `samples_per_chain` draws each, seeded from (seed, chain index); the
/// isotropic Gaussian step is tuned toward 20-40% acceptance during burn-in.
FlowEnsemble boltzmann_sample(const OdeSystem& sys, double k, std::size_t count, std::uint64_t seed,
                              const BoltzmannOptions& options = {});

struct MomentDrift {
  std::string name;
  double before = 0.0;
  double after = 0.0;
  double drift = 0.0;
  double standard_error = 0.0;
  bool significant = false;
};

struct InvarianceReport {
  double horizon = 0.0;
  std::vector<MomentDrift> drifts;
  IncompressibilityResult divergence;
  bool invariant = false;
  std::string note;
};

/// Evolves e by T and compares <H>, <q_i^2>, <p_i^2> before and after. A
/// drift is significant when |after - before| > 3 * sqrt(se_before^2 + se_after^2).
InvarianceReport invariance_test(const OdeSystem& sys, const FlowEnsemble& e, double T, double dt = 1e-2);

/// sum_{n <= order} (-k)^n / n! N(h^n).
algebra::OperatorPolynomial dual_operator(double k, const algebra::ClassicalPolynomial& h, unsigned order);

/// p^2 / 2m + m w^2 q^2 / 2.
PhasePolynomial harmonic_oscillator(double mass = 1.0, double omega = 1.0);
/// (p^2 + q^2) / 2 + lambda q^4.
PhasePolynomial quartic_oscillator(double lambda);
/// dq/dt = p / m, dp/dt = -m w^2 q - gamma p.
OdeSystem damped_oscillator(double mass, double omega, double gamma);

// Snapshot format: "# flow-ensemble dof=N seed=S" then "weight q0.. p0.." per line.
void write_flow_ensemble(std::ostream& out, const FlowEnsemble& e);
FlowEnsemble read_flow_ensemble(std::istream& in);

}  // namespace gsw::dynamics
