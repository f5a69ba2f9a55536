#include "gsw/dynamics.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "gsw/error.hpp"
#include "gsw/ordering.hpp"

namespace gsw::dynamics {
namespace {

void check_point(const OdeSystem& sys, const PhasePoint& x) {
  if (x.q.size() != sys.degrees_of_freedom() || x.p.size() != sys.degrees_of_freedom()) {
    throw ShapeError(fmt::format("phase point needs {} coordinates and momenta", sys.degrees_of_freedom()));
  }
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError(fmt::format("non-finite {} value", what));
  }
}

void check_blow_up(const PhasePoint& x) {
  for (const auto* v : {&x.q, &x.p}) {
    for (double c : *v) {
      if (!std::isfinite(c) || std::abs(c) > kBlowUpThreshold) {
        throw BlowUpError("trajectory blew up (coordinate beyond 1e12)");
      }
    }
  }
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

OdeSystem OdeSystem::hamiltonian(PhasePolynomial h) {
  OdeSystem sys;
  sys.kind_ = Kind::hamiltonian;
  sys.dof_ = h.degrees_of_freedom();
  for (std::size_t i = 0; i < sys.dof_; ++i) {
    sys.q_dot_.push_back(h.derivative_momentum(i));
    sys.p_dot_.push_back(-h.derivative_coordinate(i));
  }
  sys.h_ = std::move(h);
  sys.build_evaluators();
  return sys;
}

OdeSystem OdeSystem::polynomial_field(std::vector<PhasePolynomial> q_dot, std::vector<PhasePolynomial> p_dot) {
  if (q_dot.empty() || q_dot.size() != p_dot.size()) throw ShapeError("field needs matching q and p components");
  OdeSystem sys;
  sys.kind_ = Kind::polynomial_field;
  sys.dof_ = q_dot.size();
  for (const auto* list : {&q_dot, &p_dot}) {
    for (const auto& c : *list) {
      if (c.degrees_of_freedom() != sys.dof_) throw ShapeError("field component has the wrong number of variables");
    }
  }
  sys.q_dot_ = std::move(q_dot);
  sys.p_dot_ = std::move(p_dot);
  sys.build_evaluators();
  return sys;
}

OdeSystem OdeSystem::callable_field(std::size_t degrees_of_freedom, VectorField field) {
  if (degrees_of_freedom == 0 || !field) throw PreconditionError("callable field needs dof >= 1 and a function");
  OdeSystem sys;
  sys.kind_ = Kind::callable_field;
  sys.dof_ = degrees_of_freedom;
  sys.field_ = std::move(field);
  return sys;
}

void OdeSystem::build_evaluators() {
  for (const auto& c : q_dot_) q_eval_.emplace_back(c);
  for (const auto& c : p_dot_) p_eval_.emplace_back(c);
}

const PhasePolynomial& OdeSystem::hamiltonian_function() const {
  if (!h_) throw PreconditionError("system is not Hamiltonian");
  return *h_;
}

void OdeSystem::velocity(std::span<const double> q, std::span<const double> p, std::span<double> dq,
                         std::span<double> dp) const {
  if (kind_ == Kind::callable_field) {
    field_(q, p, dq, dp);
    return;
  }
  for (std::size_t i = 0; i < dof_; ++i) {
    dq[i] = q_eval_[i](q, p);
    dp[i] = p_eval_[i](q, p);
  }
}

PhasePoint OdeSystem::velocity(const PhasePoint& x) const {
  PhasePoint v{std::vector<double>(dof_), std::vector<double>(dof_)};
  velocity(x.q, x.p, v.q, v.p);
  return v;
}

std::optional<PhasePolynomial> symbolic_divergence(const OdeSystem& sys) {
  if (!sys.is_polynomial()) return std::nullopt;
  PhasePolynomial div(sys.degrees_of_freedom());
  for (std::size_t i = 0; i < sys.degrees_of_freedom(); ++i) {
    div += sys.q_dot()[i].derivative_coordinate(i);
    div += sys.p_dot()[i].derivative_momentum(i);
  }
  return div;
}

double divergence(const OdeSystem& sys, const PhasePoint& x) {
  check_point(sys, x);
  check_finite(x.q, "coordinate");
  check_finite(x.p, "momentum");
  if (const auto div = symbolic_divergence(sys)) return div->evaluate(x.q, x.p);

  const std::size_t n = sys.degrees_of_freedom();
  const double h = kFiniteDifferenceStep;
  std::vector<double> dq(n);
  std::vector<double> dp(n);
  double sum = 0.0;
  PhasePoint y = x;
  for (std::size_t i = 0; i < n; ++i) {
    y.q[i] = x.q[i] + h;
    sys.velocity(y.q, y.p, dq, dp);
    check_finite(dq, "field");
    double plus = dq[i];
    y.q[i] = x.q[i] - h;
    sys.velocity(y.q, y.p, dq, dp);
    check_finite(dq, "field");
    sum += (plus - dq[i]) / (2.0 * h);
    y.q[i] = x.q[i];

    y.p[i] = x.p[i] + h;
    sys.velocity(y.q, y.p, dq, dp);
    check_finite(dp, "field");
    plus = dp[i];
    y.p[i] = x.p[i] - h;
    sys.velocity(y.q, y.p, dq, dp);
    check_finite(dp, "field");
    sum += (plus - dp[i]) / (2.0 * h);
    y.p[i] = x.p[i];
  }
  return sum;
}

IncompressibilityResult is_statistically_incompressible(const OdeSystem& sys, std::span<const PhasePoint> samples) {
  if (samples.empty()) throw PreconditionError("incompressibility check needs at least one sample point");
  IncompressibilityResult r;
  const auto div = symbolic_divergence(sys);
  r.symbolic = div.has_value();
  for (const auto& x : samples) r.max_abs_divergence = std::max(r.max_abs_divergence, std::abs(divergence(sys, x)));
  r.incompressible = r.symbolic ? div->is_zero() : r.max_abs_divergence <= kIncompressibilityTolerance;
  return r;
}

double FlowEnsemble::weight(std::size_t i) const {
  return weights.empty() ? 1.0 / static_cast<double>(samples.size()) : weights[i];
}

namespace {

void verlet_step(const OdeSystem& sys, PhasePoint& x, double h, PhasePoint& v) {
  sys.velocity(x.q, x.p, v.q, v.p);
  for (std::size_t i = 0; i < x.p.size(); ++i) x.p[i] += 0.5 * h * v.p[i];
  sys.velocity(x.q, x.p, v.q, v.p);
  for (std::size_t i = 0; i < x.q.size(); ++i) x.q[i] += h * v.q[i];
  sys.velocity(x.q, x.p, v.q, v.p);
  for (std::size_t i = 0; i < x.p.size(); ++i) x.p[i] += 0.5 * h * v.p[i];
}

void midpoint_step(const OdeSystem& sys, PhasePoint& x, double h, PhasePoint& v) {
  const std::size_t n = x.q.size();
  PhasePoint mid = x;
  PhasePoint next = x;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      mid.q[i] = 0.5 * (x.q[i] + next.q[i]);
      mid.p[i] = 0.5 * (x.p[i] + next.p[i]);
    }
    sys.velocity(mid.q, mid.p, v.q, v.p);
    double change = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = x.q[i] + h * v.q[i];
      const double p = x.p[i] + h * v.p[i];
      change = std::max({change, std::abs(q - next.q[i]), std::abs(p - next.p[i])});
      scale = std::max({scale, std::abs(q), std::abs(p)});
      next.q[i] = q;
      next.p[i] = p;
    }
    if (change <= 1e-15 * scale) {
      x = std::move(next);
      return;
    }
    check_blow_up(next);
  }
  throw NumericalError("implicit midpoint iteration did not converge; reduce dt");
}

void rk4_step(const OdeSystem& sys, PhasePoint& x, double h) {
  const std::size_t n = x.q.size();
  auto shifted = [&](const PhasePoint& k, double c) {
    PhasePoint y = x;
    for (std::size_t i = 0; i < n; ++i) {
      y.q[i] += c * k.q[i];
      y.p[i] += c * k.p[i];
    }
    return y;
  };
  const auto k1 = sys.velocity(x);
  const auto k2 = sys.velocity(shifted(k1, 0.5 * h));
  const auto k3 = sys.velocity(shifted(k2, 0.5 * h));
  const auto k4 = sys.velocity(shifted(k3, h));
  for (std::size_t i = 0; i < n; ++i) {
    x.q[i] += h / 6.0 * (k1.q[i] + 2.0 * k2.q[i] + 2.0 * k3.q[i] + k4.q[i]);
    x.p[i] += h / 6.0 * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
  }
}

}  // namespace

PhasePoint evolve_point(const OdeSystem& sys, PhasePoint x, double T, double dt) {
  check_point(sys, x);
  if (!(T >= 0.0) || !std::isfinite(T)) throw PreconditionError("evolution time must be finite and >= 0");
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  if (T == 0.0) return x;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
  const double h = T / static_cast<double>(std::max<std::size_t>(steps, 1));
  const bool verlet = sys.is_hamiltonian() && sys.hamiltonian_function().is_separable();
  PhasePoint v{std::vector<double>(x.q.size()), std::vector<double>(x.p.size())};
  for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
    if (verlet) verlet_step(sys, x, h, v);
    else if (sys.is_hamiltonian()) midpoint_step(sys, x, h, v);
    else rk4_step(sys, x, h);
    check_blow_up(x);
  }
  return x;
}

FlowEnsemble evolve(const OdeSystem& sys, const FlowEnsemble& e, double T, double dt) {
  FlowEnsemble out = e;
  for (auto& x : out.samples) x = evolve_point(sys, std::move(x), T, dt);
  return out;
}

namespace {

double eval_at(const PhasePolynomial& h, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(h.degrees_of_freedom());
  return h.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(n)),
                    std::span<const double>(x.data() + n, static_cast<std::size_t>(n)));
}

Eigen::MatrixXd quadratic_hessian(const PhasePolynomial& h) {
  const auto dim = static_cast<Eigen::Index>(2 * h.degrees_of_freedom());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  const auto quadratic = h.homogeneous_part(2);
  for (const auto& [key, c] : quadratic.terms()) {
    std::vector<Eigen::Index> vars;
    for (std::size_t i = 0; i < key.size(); ++i)
      for (std::uint32_t r = 0; r < key[i]; ++r) vars.push_back(static_cast<Eigen::Index>(i));
    if (vars[0] == vars[1]) {
      a(vars[0], vars[0]) += 2.0 * c.real();
    } else {
      a(vars[0], vars[1]) += c.real();
      a(vars[1], vars[0]) += c.real();
    }
  }
  return a;
}

}  // namespace

std::optional<std::string> normalizability_issue(const PhasePolynomial& h) {
  const unsigned degree = h.degree();
  if (degree > 4) return fmt::format("degree {} > 4 cannot be certified", degree);
  if (degree == 3) return std::string("cubic leading part is unbounded below");
  const auto a = quadratic_hessian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  if (degree < 4 && !(eig.eigenvalues().minCoeff() > 0.0)) return std::string("quadratic part is not positive definite");
  if (degree == 4) {
    if (!(eig.eigenvalues().minCoeff() > 0.0)) return std::string("quadratic part is not positive definite");
    const auto quartic = h.homogeneous_part(4);
    const auto cubic = h.homogeneous_part(3);
    const auto dim = static_cast<Eigen::Index>(2 * h.degrees_of_freedom());
    std::vector<Eigen::VectorXd> probes;
    for (Eigen::Index i = 0; i < dim; ++i) {
      probes.push_back(Eigen::VectorXd::Unit(dim, i));
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        probes.push_back((Eigen::VectorXd::Unit(dim, i) + Eigen::VectorXd::Unit(dim, j)).normalized());
        probes.push_back((Eigen::VectorXd::Unit(dim, i) - Eigen::VectorXd::Unit(dim, j)).normalized());
      }
    }
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (int s = 0; s < 512; ++s) {
      Eigen::VectorXd v(dim);
      for (Eigen::Index i = 0; i < dim; ++i) v(i) = gauss(rng);
      probes.push_back(v.normalized());
    }
    // With cubic terms a merely nonnegative quartic can leave flat directions
    // along which the cubic wins, so strict positivity is required then.
    const bool has_cubic = !cubic.is_zero();
    for (const auto& v : probes) {
      const double value = eval_at(quartic, v);
      if (value < 0.0 || (has_cubic && !(value > 0.0))) {
        return std::string(has_cubic ? "quartic part not strictly positive while cubic terms are present"
                                     : "quartic part is negative in some direction");
      }
    }
  }
  return std::nullopt;
}

FlowEnsemble boltzmann_sample(const OdeSystem& sys, double k, std::size_t count, std::uint64_t seed,
                              const BoltzmannOptions& options) {
  if (!(k > 0.0) || !std::isfinite(k)) throw PreconditionError("k must be positive (exp(-kH) is not normalizable otherwise)");
  if (count == 0) throw PreconditionError("sample count must be positive");
  if (options.samples_per_chain == 0 || options.thinning == 0) throw PreconditionError("thinning and samples_per_chain must be positive");
  const auto& h = sys.hamiltonian_function();
  if (const auto issue = normalizability_issue(h)) throw PreconditionError("exp(-kH) not normalizable: " + *issue);

  const std::size_t n = h.degrees_of_freedom();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  double step = options.initial_step;
  if (!(step > 0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(quadratic_hessian(h), Eigen::EigenvaluesOnly);
    step = 1.0 / std::sqrt(k * eig.eigenvalues().maxCoeff());
  }
  const algebra::PhaseEvaluator energy(h);
  auto energy_at = [&](const Eigen::VectorXd& x) {
    return energy(std::span<const double>(x.data(), n), std::span<const double>(x.data() + n, n));
  };

  FlowEnsemble out;
  out.seed = seed;
  out.samples.reserve(count);
  const std::size_t chains = (count + options.samples_per_chain - 1) / options.samples_per_chain;
  for (std::size_t c = 0; c < chains; ++c) {
    auto rng = stream(seed, c);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    double e = energy_at(x);
    double scale = step;
    unsigned accepted = 0;
    auto advance = [&]() {
      Eigen::VectorXd y(dim);
      for (Eigen::Index i = 0; i < dim; ++i) y(i) = x(i) + scale * gauss(rng);
      const double ey = energy_at(y);
      if (std::log(unit(rng)) < -k * (ey - e)) {
        x = std::move(y);
        e = ey;
        ++accepted;
      }
    };
    constexpr unsigned kWindow = 50;
    for (unsigned s = 1; s <= options.burn_in; ++s) {
      advance();
      if (s % kWindow == 0) {
        const double rate = static_cast<double>(accepted) / kWindow;
        if (rate < 0.2) scale *= 0.7;
        else if (rate > 0.4) scale *= 1.3;
        accepted = 0;
      }
    }
    for (unsigned s = 0; s < options.samples_per_chain && out.samples.size() < count; ++s) {
      for (unsigned t = 0; t < options.thinning; ++t) advance();
      out.samples.push_back(PhasePoint{std::vector<double>(x.data(), x.data() + n),
                                       std::vector<double>(x.data() + n, x.data() + 2 * n)});
    }
  }
  return out;
}

namespace {

struct Moment {
  double mean = 0.0;
  double standard_error = 0.0;
};

Moment moment_of(const FlowEnsemble& e, const std::vector<double>& values) {
  const std::size_t n = values.size();
  Moment m;
  if (e.weights.empty()) {
    for (double v : values) m.mean += v;
    m.mean /= static_cast<double>(n);
    if (n > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - m.mean) * (v - m.mean);
      m.standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return m;
  }
  for (std::size_t i = 0; i < n; ++i) m.mean += e.weights[i] * values[i];
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += e.weights[i] * e.weights[i] * (values[i] - m.mean) * (values[i] - m.mean);
  m.standard_error = std::sqrt(s);
  return m;
}

}  // namespace

InvarianceReport invariance_test(const OdeSystem& sys, const FlowEnsemble& e, double T, double dt) {
  if (e.samples.empty()) throw PreconditionError("invariance test needs a nonempty ensemble");
  if (!e.weights.empty() && e.weights.size() != e.samples.size()) throw ShapeError("weights and samples differ in length");
  for (const auto& x : e.samples) check_point(sys, x);
  const auto later = evolve(sys, e, T, dt);

  using Observable = std::pair<std::string, std::function<double(const PhasePoint&)>>;
  std::vector<Observable> observables;
  if (sys.is_hamiltonian()) {
    const auto& h = sys.hamiltonian_function();
    observables.emplace_back("H", [&h](const PhasePoint& x) { return h.evaluate(x.q, x.p); });
  }
  for (std::size_t i = 0; i < sys.degrees_of_freedom(); ++i) {
    observables.emplace_back(fmt::format("q{}^2", i), [i](const PhasePoint& x) { return x.q[i] * x.q[i]; });
    observables.emplace_back(fmt::format("p{}^2", i), [i](const PhasePoint& x) { return x.p[i] * x.p[i]; });
  }

  InvarianceReport r;
  r.horizon = T;
  r.invariant = true;
  for (const auto& [name, f] : observables) {
    std::vector<double> v0;
    std::vector<double> v1;
    for (const auto& x : e.samples) v0.push_back(f(x));
    for (const auto& x : later.samples) v1.push_back(f(x));
    const auto m0 = moment_of(e, v0);
    const auto m1 = moment_of(later, v1);
    MomentDrift d{name, m0.mean, m1.mean, m1.mean - m0.mean,
                  std::hypot(m0.standard_error, m1.standard_error), false};
    d.significant = std::abs(d.drift) > 3.0 * d.standard_error;
    r.invariant = r.invariant && !d.significant;
    r.drifts.push_back(std::move(d));
  }
  r.divergence = is_statistically_incompressible(sys, e.samples);
  r.note = "tests invariance of sampled moments under the flow; ergodicity is not tested";
  return r;
}

algebra::OperatorPolynomial dual_operator(double k, const algebra::ClassicalPolynomial& h, unsigned order) {
  const std::size_t modes = h.number_of_modes();
  const auto minus_k = -Scalar::from_double(k);
  auto power = algebra::ClassicalPolynomial::constant(modes, 1);
  Scalar c = 1;
  algebra::ClassicalPolynomial series(modes);
  series += power;
  for (unsigned n = 1; n <= order; ++n) {
    power *= h;
    c *= minus_k;
    c /= n;
    series += c * power;
  }
  return algebra::normal_product(series);
}

PhasePolynomial harmonic_oscillator(double mass, double omega) {
  const auto q = PhasePolynomial::coordinate(1, 0);
  const auto p = PhasePolynomial::momentum(1, 0);
  return Scalar::from_double(0.5 / mass) * (p * p) + Scalar::from_double(0.5 * mass * omega * omega) * (q * q);
}

PhasePolynomial quartic_oscillator(double lambda) {
  const auto q = PhasePolynomial::coordinate(1, 0);
  const auto p = PhasePolynomial::momentum(1, 0);
  return Scalar::rational(1, 2) * (p * p + q * q) + Scalar::from_double(lambda) * pow(q, 4);
}

OdeSystem damped_oscillator(double mass, double omega, double gamma) {
  const auto q = PhasePolynomial::coordinate(1, 0);
  const auto p = PhasePolynomial::momentum(1, 0);
  return OdeSystem::polynomial_field({Scalar::from_double(1.0 / mass) * p},
                                     {-(Scalar::from_double(mass * omega * omega) * q) - Scalar::from_double(gamma) * p});
}

void write_flow_ensemble(std::ostream& out, const FlowEnsemble& e) {
  const std::size_t n = e.samples.empty() ? 0 : e.samples.front().q.size();
  out << "# flow-ensemble dof=" << n << " seed=" << e.seed << '\n';
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    out << fmt::format("{:.17g}", e.weight(i));
    for (double v : e.samples[i].q) out << fmt::format(" {:.17g}", v);
    for (double v : e.samples[i].p) out << fmt::format(" {:.17g}", v);
    out << '\n';
  }
}

FlowEnsemble read_flow_ensemble(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# flow-ensemble", 0) != 0) throw ParseError("expected '# flow-ensemble' header", 0);
  const auto dof_at = line.find("dof=");
  const auto seed_at = line.find("seed=");
  if (dof_at == std::string::npos) throw ParseError("header lacks dof=", 0);
  const std::size_t n = std::stoul(line.substr(dof_at + 4));
  FlowEnsemble e;
  if (seed_at != std::string::npos) e.seed = std::stoull(line.substr(seed_at + 5));
  std::vector<double> weights;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream record(line);
    double w = 0.0;
    PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
    record >> w;
    for (auto& v : x.q) record >> v;
    for (auto& v : x.p) record >> v;
    if (!record) throw ParseError(fmt::format("record needs a weight and {} values", 2 * n), line_no);
    weights.push_back(w);
    e.samples.push_back(std::move(x));
  }
  const double uniform = e.samples.empty() ? 0.0 : 1.0 / static_cast<double>(e.samples.size());
  if (std::any_of(weights.begin(), weights.end(), [&](double w) { return std::abs(w - uniform) > 1e-15; })) {
    e.weights = std::move(weights);
  }
  return e;
}

}  // namespace gsw::dynamics
