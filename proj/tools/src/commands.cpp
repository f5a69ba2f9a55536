#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "gsw/cli/cli.hpp"
#include "gsw/dynamics.hpp"
#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "gsw/fock.hpp"
#include "gsw/fock_io.hpp"
#include "gsw/lattice.hpp"
#include "gsw/ordering.hpp"
#include "gsw/pmap.hpp"
#include "gsw/polynomial_io.hpp"
#include "gsw/spectral.hpp"

namespace gsw::cli {
namespace {

using algebra::ClassicalPolynomial;
using algebra::OperatorPolynomial;
using algebra::PhasePolynomial;
using Json = nlohmann::json;

constexpr const char* kDefaultOscillator = "0.5*p0^2 + 0.5*q0^2";

void add_check(Report& r, std::string name, double value, double tolerance, const std::string& relation) {
  bool pass = false;
  if (relation == "<=") pass = value <= tolerance;
  else if (relation == ">=") pass = value >= tolerance;
  else if (relation == ">") pass = value > tolerance;
  else pass = value == tolerance;
  r.checks.push_back({std::move(name), value, tolerance, relation, pass});
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("{}: '{}' is not a number", field, text));
  }
}

algebra::ParameterMap parameters(const ExperimentConfig& c) {
  algebra::ParameterMap out;
  for (const auto& binding : c.params) {
    const auto eq = binding.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param: expected name=value, got '" + binding + "'");
    out[binding.substr(0, eq)] = Scalar::from_double(to_number(binding.substr(eq + 1), "--param"));
  }
  return out;
}

std::size_t mode_count(const ExperimentConfig& c, std::initializer_list<const std::string*> texts) {
  if (c.modes) return *c.modes;
  std::size_t modes = 1;
  for (const auto* t : texts) modes = std::max(modes, algebra::infer_mode_count(*t));
  return modes;
}

ClassicalState parse_state(const std::string& text, const std::string& field) {
  std::vector<std::complex<double>> a;
  for (const auto& mode : split(text, ';')) {
    const auto parts = split(mode, ',');
    if (parts.empty() || parts.size() > 2) throw UsageError(field + ": expected re,im per mode");
    a.emplace_back(to_number(parts[0], field), parts.size() == 2 ? to_number(parts[1], field) : 0.0);
  }
  return ClassicalState(std::move(a));
}

pmap::WeightedEnsemble parse_ensemble(const std::string& spec, std::size_t modes, const ExperimentConfig& c) {
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto body = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  pmap::WeightedEnsemble e;
  if (kind == "point") {
    std::vector<ClassicalState> states;
    for (const auto& point : split(body, '|')) states.push_back(parse_state(point, "--ensemble"));
    e = pmap::WeightedEnsemble::uniform(std::move(states));
  } else if (kind == "phase") {
    const auto parts = split(body, ':');
    if (parts.size() != 2) throw UsageError("--ensemble: expected phase:<K>:<radius>[,<radius>...]");
    const double k = to_number(parts[0], "--ensemble");
    if (k < 1 || k != std::floor(k)) throw UsageError("--ensemble: K must be a positive integer");
    std::vector<double> radii;
    for (const auto& r : split(parts[1], ',')) radii.push_back(to_number(r, "--ensemble"));
    if (radii.size() == 1 && modes > 1) radii.assign(modes, radii.front());
    e = pmap::phase_ensemble(static_cast<unsigned>(k), radii);
  } else if (kind == "levelset") {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw UsageError("--ensemble: expected levelset:<E>:<count>:<seed>");
    if (c.h.empty()) throw UsageError("--ensemble: levelset ensembles need --h");
    const auto h = algebra::parse_classical(c.h, algebra::default_mode_names(modes), parameters(c));
    const double count = to_number(parts[1], "--ensemble");
    const double seed = to_number(parts[2], "--ensemble");
    if (count < 1 || count != std::floor(count) || seed < 0 || seed != std::floor(seed)) {
      throw UsageError("--ensemble: levelset count and seed must be nonnegative integers");
    }
    e = spectral::level_set_ensemble(h, to_number(parts[0], "--ensemble"), static_cast<std::size_t>(count),
                                     static_cast<std::uint64_t>(seed));
  } else if (kind == "file") {
    std::ifstream in(body);
    if (!in) throw UsageError("--ensemble: cannot open '" + body + "'");
    e = pmap::read_ensemble(in);
  } else {
    throw UsageError("--ensemble: unknown ensemble kind '" + kind + "'");
  }
  if (e.number_of_modes() != modes) {
    throw UsageError(fmt::format("--ensemble: has {} modes, expression has {}", e.number_of_modes(), modes));
  }
  return e;
}

fock::FockBasis choose_basis(const ExperimentConfig& c, std::size_t modes, const std::vector<ClassicalState>& states,
                             unsigned margin) {
  if (c.cutoffs.empty()) {
    if (states.empty()) throw UsageError("--cutoff: required when no ensemble is given");
    return fock::adequate_basis(states, margin);
  }
  if (c.cutoffs.size() == 1) return fock::FockBasis::uniform(modes, c.cutoffs.front());
  if (c.cutoffs.size() != modes) throw UsageError(fmt::format("--cutoff: expected 1 or {} values", modes));
  return fock::FockBasis(c.cutoffs);
}

void dump(const ExperimentConfig& c, const std::string& what, const std::function<void(std::ostream&)>& write) {
  if (c.dump_prefix.empty()) return;
  const auto path = c.dump_prefix + "." + what + ".txt";
  std::ofstream out(path);
  if (!out) throw UsageError("--dump: cannot write '" + path + "'");
  write(out);
}

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json basis_json(const fock::FockBasis& b) { return Json{{"cutoffs", b.cutoffs()}, {"dimension", b.dimension()}}; }

// ---------------------------------------------------------------------------

void normal_order_cmd(const ExperimentConfig& c, Report& r) {
  const auto modes = mode_count(c, {&c.expr});
  const auto names = algebra::default_mode_names(modes);
  const auto raw = algebra::parse_raw_operator(c.expr, names, parameters(c));
  const auto p = algebra::normal_order(raw);
  r.text = p.to_string(names);
  r.results = {{"normal_ordered", r.text}, {"terms", p.size()}, {"degree", p.degree()}, {"hermitian", p.is_hermitian()}};
  dump(c, "polynomial", [&](std::ostream& out) { algebra::write_polynomial(out, p); });
}

void quantize_cmd(const ExperimentConfig& c, Report& r) {
  const auto modes = mode_count(c, {&c.expr});
  const auto names = algebra::default_mode_names(modes);
  const auto g = algebra::parse_classical(c.expr, names, parameters(c));
  const auto gn = algebra::normal_product(g);
  const auto gr = algebra::quantize_raw(g);
  const auto gap = gr - gn;
  r.results = {{"classical", g.to_string(names)},
               {"normal_product", gn.to_string(names)},
               {"raw", gr.to_string(names)},
               {"raw_minus_normal", gap.to_string(names)}};
  if (c.rule == "normal") r.text = gn.to_string(names);
  else if (c.rule == "raw") r.text = gr.to_string(names);
  else r.text = fmt::format("G_n = {}\nG_r = {}\nG_r - G_n = {}", gn.to_string(names), gr.to_string(names), gap.to_string(names));
  dump(c, "normal", [&](std::ostream& out) { algebra::write_polynomial(out, gn); });
  dump(c, "raw", [&](std::ostream& out) { algebra::write_polynomial(out, gr); });
}

void spectrum_cmd(const ExperimentConfig& c, Report& r) {
  const auto modes = mode_count(c, {&c.h});
  const auto names = algebra::default_mode_names(modes);
  const auto h = algebra::parse_classical(c.h, names, parameters(c));
  const double energy = c.energy.value();
  std::optional<pmap::WeightedEnsemble> e;
  if (!c.ensemble.empty()) e = parse_ensemble(c.ensemble, modes, c);
  const auto basis = choose_basis(c, modes, e ? e->states() : std::vector<ClassicalState>{}, 2 * h.degree());
  const auto report = spectral::analyze(h, energy, e ? &*e : nullptr, basis, c.tolerance);

  Json zero_states = Json::array();
  for (Eigen::Index col = 0; col < report.zero_vectors.cols(); ++col) {
    Json support = Json::array();
    for (Eigen::Index i = 0; i < report.zero_vectors.rows(); ++i) {
      const double w = std::norm(report.zero_vectors(i, col));
      if (w > 1e-6) support.push_back({{"occupations", basis.occupations_of(static_cast<std::size_t>(i))}, {"weight", w}});
    }
    zero_states.push_back(support);
  }
  Json series = Json::array();
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) series.push_back({{"index", i}, {"eigenvalue", report.eigenvalues[i]}});
  const auto m = spectral::build_M(h, energy);
  r.results = {{"M", m.to_string(names)},
               {"basis", basis_json(basis)},
               {"eigenvalues", report.eigenvalues},
               {"min_eigenvalue", report.min_eigenvalue},
               {"zero_tolerance", report.zero_tolerance},
               {"zero_space_dimension", report.zero_space_dimension},
               {"zero_states", zero_states},
               {"series", series}};
  if (e) {
    r.results["ensemble_size"] = e->size();
    r.results["ensemble_residual"] = *report.ensemble_residual;
    r.results["ensemble_projection_deficit"] = *report.ensemble_projection_deficit;
    const auto mm = fock::build_matrix(m, basis);
    std::vector<fock::FockVector> states;
    for (const auto& s : e->states()) states.push_back(fock::coherent_state(s, basis));
    const double span_min = spectral::span_minimum(mm, states);
    const double mix_min = spectral::mixture_minimum(mm, states);
    r.results["span_minimum"] = span_min;
    r.results["mixture_minimum"] = mix_min;
    add_check(r, "ensemble_residual", std::abs(*report.ensemble_residual), 1e-7, "<=");
    add_check(r, "mixture_minimum", mix_min, -1e-7, ">=");
    dump(c, "ensemble", [&](std::ostream& out) { pmap::write_ensemble(out, *e); });
  }
  dump(c, "polynomial", [&](std::ostream& out) { algebra::write_polynomial(out, m); });
  dump(c, "matrix", [&](std::ostream& out) { fock::write_matrix(out, fock::build_matrix(m, basis)); });
}

void trace_check_cmd(const ExperimentConfig& c, Report& r) {
  const auto modes = mode_count(c, {&c.g, &c.h});
  const auto names = algebra::default_mode_names(modes);
  const auto g = algebra::parse_classical(c.g, names, parameters(c));
  const auto e = parse_ensemble(c.ensemble, modes, c);
  const auto basis = choose_basis(c, modes, e.states(), g.degree());
  pmap::TraceCheckOptions options;
  options.max_degree = c.max_degree;
  const auto report = pmap::trace_theorem_check(g, e, basis, options);
  r.results = {{"G_n", algebra::normal_product(g).to_string(names)},
               {"basis", basis_json(basis)},
               {"ensemble_size", e.size()},
               {"classical_expectation", complex_json(report.classical_expectation)},
               {"quantum_trace", complex_json(report.quantum_trace)},
               {"residual", report.residual},
               {"truncation_bound_used", report.truncation_bound_used}};
  add_check(r, "residual", report.residual, c.tolerance.value_or(1e-8), "<=");
  dump(c, "polynomial", [&](std::ostream& out) { algebra::write_polynomial(out, algebra::normal_product(g)); });
  dump(c, "ensemble", [&](std::ostream& out) { pmap::write_ensemble(out, e); });
}

lattice::ModelFile lattice_model(const ExperimentConfig& c) {
  if (!c.model_path.empty()) {
    std::ifstream in(c.model_path);
    if (!in) throw UsageError("--model: cannot open '" + c.model_path + "'");
    return lattice::parse_model(in);
  }
  lattice::ModelFile file;
  file.model.sites = c.sites;
  file.model.spacing = c.spacing;
  file.model.masses = c.masses;
  const auto names = algebra::default_mode_names(c.masses.size());
  file.model.interaction = c.interaction.empty() ? PhasePolynomial(c.masses.size())
                                                 : algebra::parse_phase(c.interaction, names);
  file.model.validate();
  return file;
}

void lattice_check_cmd(const ExperimentConfig& c, Report& r) {
  auto file = lattice_model(c);
  const auto& model = file.model;
  const lattice::ModeTransform transform(model);
  const auto h = lattice::classical_hamiltonian(model);
  const auto hn = algebra::normal_product(h);
  const auto real_space = lattice::real_space_hamiltonian(model);
  const std::size_t modes = model.number_of_modes();

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> draw(-c.amplitude, c.amplitude);
  std::vector<lattice::FieldConfiguration> cfgs;
  std::vector<ClassicalState> states;
  double round_trip = 0.0;
  double energy_gap = 0.0;
  for (std::size_t i = 0; i < c.configs; ++i) {
    lattice::FieldConfiguration cfg{std::vector<double>(modes), std::vector<double>(modes)};
    for (auto& v : cfg.phi) v = draw(rng);
    for (auto& v : cfg.pi) v = draw(rng);
    const auto s = transform.forward(cfg);
    const auto back = transform.inverse(s);
    for (std::size_t j = 0; j < modes; ++j) {
      round_trip = std::max({round_trip, std::abs(back.phi[j] - cfg.phi[j]), std::abs(back.pi[j] - cfg.pi[j])});
    }
    energy_gap = std::max(energy_gap, std::abs(h.evaluate(s.view()).real() - real_space.evaluate(cfg.phi, cfg.pi)));
    cfgs.push_back(std::move(cfg));
    states.push_back(s);
  }
  ExperimentConfig effective = c;
  if (effective.cutoffs.empty()) effective.cutoffs = file.cutoffs;
  const unsigned degree = h.degree();
  const auto basis = choose_basis(effective, modes, states, degree);
  const auto hm = fock::build_matrix(hn, basis);
  double trace_residual = 0.0;
  double worst_bound = 0.0;
  for (const auto& s : states) {
    const double bound = fock::truncation_bound(s, basis, degree);
    worst_bound = std::max(worst_bound, bound);
    if (bound > fock::kDefaultTruncationTolerance) {
      throw TruncationError(fmt::format("truncation inadequate: tail bound {:.3g} beyond cutoff - {}", bound, degree));
    }
    const auto v = fock::coherent_state(s, basis);
    trace_residual = std::max(trace_residual, std::abs(fock::expectation(hm, v) - h.evaluate(s.view())));
  }
  const auto vacuum = fock::coherent_state(ClassicalState(std::vector<std::complex<double>>(modes)), basis);
  const double vacuum_energy = std::abs(fock::expectation(hm, vacuum));

  r.results = {{"modes", modes},
               {"frequencies", transform.frequencies()},
               {"classical_hamiltonian", h.to_string()},
               {"normal_hamiltonian", hn.to_string()},
               {"basis", basis_json(basis)},
               {"truncation_bound_used", worst_bound},
               {"round_trip_error", round_trip},
               {"energy_consistency_error", energy_gap},
               {"trace_residual", trace_residual},
               {"vacuum_energy", vacuum_energy}};
  add_check(r, "round_trip", round_trip, 1e-12, "<=");
  add_check(r, "energy_consistency", energy_gap, 1e-10, "<=");
  add_check(r, "trace_residual", trace_residual, c.tolerance.value_or(1e-6), "<=");
  add_check(r, "vacuum_energy", vacuum_energy, 0.0, "<=");
  if (model.interaction.is_zero()) {
    const auto eig = fock::hermitian_eigen(hm);
    std::vector<double> expected;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
      const auto occ = basis.occupations_of(i);
      double e = 0.0;
      for (std::size_t j = 0; j < modes; ++j) e += occ[j] * transform.frequency(j);
      expected.push_back(e);
    }
    std::sort(expected.begin(), expected.end());
    double gap = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) gap = std::max(gap, std::abs(expected[i] - eig.eigenvalues[i]));
    r.results["free_spectrum_error"] = gap;
    add_check(r, "free_spectrum", gap, 1e-10, "<=");
  }
  dump(c, "classical", [&](std::ostream& out) { algebra::write_polynomial(out, h); });
  dump(c, "normal", [&](std::ostream& out) { algebra::write_polynomial(out, hn); });
  dump(c, "states", [&](std::ostream& out) { pmap::write_ensemble(out, pmap::WeightedEnsemble::uniform(states)); });
}

dynamics::OdeSystem phase_system(const ExperimentConfig& c, const std::string& fallback) {
  if (!c.model_path.empty()) return dynamics::OdeSystem::hamiltonian(lattice::real_space_hamiltonian(lattice_model(c).model));
  const std::string& text = c.hamiltonian.empty() ? fallback : c.hamiltonian;
  if (text.empty()) throw UsageError("--hamiltonian: required (or --damped / --model)");
  const auto dof = mode_count(c, {&text});
  return dynamics::OdeSystem::hamiltonian(algebra::parse_phase(text, algebra::default_mode_names(dof), parameters(c)));
}

void incompressibility_cmd(const ExperimentConfig& c, Report& r) {
  const auto sys = c.damped ? dynamics::damped_oscillator(1.0, 1.0, c.gamma) : phase_system(c, "");
  const std::size_t n = sys.degrees_of_freedom();
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> gauss;
  std::vector<dynamics::PhasePoint> points;
  for (std::size_t i = 0; i < c.samples; ++i) {
    dynamics::PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
    for (auto& v : x.q) v = gauss(rng);
    for (auto& v : x.p) v = gauss(rng);
    points.push_back(std::move(x));
  }
  const auto result = dynamics::is_statistically_incompressible(sys, points);
  const auto div = dynamics::symbolic_divergence(sys);
  r.results = {{"degrees_of_freedom", n},
               {"symbolic", result.symbolic},
               {"symbolic_divergence", div ? div->to_string() : std::string()},
               {"max_abs_divergence", result.max_abs_divergence},
               {"incompressible", result.incompressible}};
  if (c.expect == "compressible") {
    add_check(r, "compressible", result.max_abs_divergence, dynamics::kIncompressibilityTolerance, ">");
  } else {
    add_check(r, "incompressible", result.max_abs_divergence, result.symbolic ? 0.0 : dynamics::kIncompressibilityTolerance, "<=");
  }
  dynamics::FlowEnsemble sampled;
  sampled.samples = points;
  sampled.seed = c.seed;
  dump(c, "points", [&](std::ostream& out) { dynamics::write_flow_ensemble(out, sampled); });
}

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

Estimate estimate(const std::vector<double>& v) {
  Estimate e;
  for (double x : v) e.mean += x;
  e.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - e.mean) * (x - e.mean);
    e.standard_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

// Covariance (k A)^-1 for H = x^T A x / 2 with no other terms, else nothing.
std::optional<Eigen::MatrixXd> gaussian_covariance(const PhasePolynomial& h, double k) {
  const auto dim = static_cast<Eigen::Index>(2 * h.degrees_of_freedom());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [key, coeff] : h.terms()) {
    std::vector<Eigen::Index> vars;
    for (std::size_t i = 0; i < key.size(); ++i)
      for (std::uint32_t p = 0; p < key[i]; ++p) vars.push_back(static_cast<Eigen::Index>(i));
    if (vars.size() != 2) return std::nullopt;
    if (vars[0] == vars[1]) {
      a(vars[0], vars[0]) += 2.0 * coeff.real();
    } else {
      a(vars[0], vars[1]) += coeff.real();
      a(vars[1], vars[0]) += coeff.real();
    }
  }
  return (k * a).inverse();
}

void boltzmann_cmd(const ExperimentConfig& c, Report& r) {
  const auto sys = phase_system(c, kDefaultOscillator);
  const auto& h = sys.hamiltonian_function();
  const auto e = dynamics::boltzmann_sample(sys, c.k, c.count, c.seed);
  const std::size_t n = sys.degrees_of_freedom();
  const auto cov = gaussian_covariance(h, c.k);

  std::vector<std::pair<std::string, std::function<double(const dynamics::PhasePoint&)>>> observables;
  observables.emplace_back("H", [&h](const dynamics::PhasePoint& x) { return h.evaluate(x.q, x.p); });
  std::vector<std::optional<double>> oracle{cov ? std::optional<double>(static_cast<double>(2 * n) / (2.0 * c.k)) : std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    observables.emplace_back(fmt::format("q{}^2", i), [i](const dynamics::PhasePoint& x) { return x.q[i] * x.q[i]; });
    oracle.push_back(cov ? std::optional<double>((*cov)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))) : std::nullopt);
    observables.emplace_back(fmt::format("p{}^2", i), [i](const dynamics::PhasePoint& x) { return x.p[i] * x.p[i]; });
    oracle.push_back(cov ? std::optional<double>((*cov)(static_cast<Eigen::Index>(n + i), static_cast<Eigen::Index>(n + i))) : std::nullopt);
  }
  Json moments = Json::object();
  for (std::size_t o = 0; o < observables.size(); ++o) {
    std::vector<double> values;
    for (const auto& x : e.samples) values.push_back(observables[o].second(x));
    const auto est = estimate(values);
    Json m{{"mean", est.mean}, {"standard_error", est.standard_error}};
    if (oracle[o]) {
      m["gaussian_oracle"] = *oracle[o];
      add_check(r, "mean_" + observables[o].first, std::abs(est.mean - *oracle[o]), 3.0 * est.standard_error, "<=");
    }
    moments[observables[o].first] = m;
  }
  r.results = {{"hamiltonian", h.to_string()}, {"samples", e.size()}, {"moments", moments}, {"gaussian_oracle", cov.has_value()}};
  dump(c, "ensemble", [&](std::ostream& out) { dynamics::write_flow_ensemble(out, e); });
}

dynamics::FlowEnsemble flow_ensemble(const ExperimentConfig& c, const dynamics::OdeSystem& sys) {
  const auto colon = c.ensemble.find(':');
  const auto kind = c.ensemble.substr(0, colon);
  const auto body = colon == std::string::npos ? std::string() : c.ensemble.substr(colon + 1);
  const std::size_t n = sys.degrees_of_freedom();
  if (kind == "boltzmann") {
    const auto parts = split(body, ':');
    if (parts.size() != 2) throw UsageError("--ensemble: expected boltzmann:<k>:<count>");
    const double count = to_number(parts[1], "--ensemble");
    if (count < 1 || count != std::floor(count)) throw UsageError("--ensemble: count must be a positive integer");
    return dynamics::boltzmann_sample(sys, to_number(parts[0], "--ensemble"), static_cast<std::size_t>(count), c.seed);
  }
  if (kind == "point") {
    dynamics::FlowEnsemble e;
    e.seed = c.seed;
    for (const auto& point : split(body, ';')) {
      const auto parts = split(point, ',');
      if (parts.size() != 2 * n) throw UsageError(fmt::format("--ensemble: each point needs {} values (q..., p...)", 2 * n));
      dynamics::PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
      for (std::size_t i = 0; i < n; ++i) {
        x.q[i] = to_number(parts[i], "--ensemble");
        x.p[i] = to_number(parts[n + i], "--ensemble");
      }
      e.samples.push_back(std::move(x));
    }
    return e;
  }
  if (kind == "file") {
    std::ifstream in(body);
    if (!in) throw UsageError("--ensemble: cannot open '" + body + "'");
    return dynamics::read_flow_ensemble(in);
  }
  throw UsageError("--ensemble: unknown ensemble kind '" + kind + "'");
}

void invariance_cmd(const ExperimentConfig& c, Report& r) {
  const auto sys = phase_system(c, kDefaultOscillator);
  const auto e = flow_ensemble(c, sys);
  const auto report = dynamics::invariance_test(sys, e, c.T, c.dt);
  Json drifts = Json::array();
  const dynamics::MomentDrift* largest = nullptr;
  for (const auto& d : report.drifts) {
    drifts.push_back({{"name", d.name},
                      {"before", d.before},
                      {"after", d.after},
                      {"drift", d.drift},
                      {"standard_error", d.standard_error},
                      {"significant", d.significant}});
    if (!largest || std::abs(d.drift) - 3.0 * d.standard_error > std::abs(largest->drift) - 3.0 * largest->standard_error) {
      largest = &d;
    }
  }
  r.results = {{"horizon", report.horizon},
               {"samples", e.size()},
               {"drifts", drifts},
               {"invariant", report.invariant},
               {"incompressible", report.divergence.incompressible},
               {"max_abs_divergence", report.divergence.max_abs_divergence},
               {"note", report.note}};
  if (c.expect == "drift") {
    add_check(r, "significant_drift_" + largest->name, std::abs(largest->drift), 3.0 * largest->standard_error, ">");
  } else {
    for (const auto& d : report.drifts) add_check(r, "drift_" + d.name, std::abs(d.drift), 3.0 * d.standard_error, "<=");
  }
  dump(c, "ensemble", [&](std::ostream& out) { dynamics::write_flow_ensemble(out, e); });
}

void dual_check_cmd(const ExperimentConfig& c, Report& r) {
  const auto s = parse_state(c.alpha, "--alpha");
  const auto modes = c.modes.value_or(std::max(s.number_of_modes(), algebra::infer_mode_count(c.h)));
  if (s.number_of_modes() != modes) throw UsageError(fmt::format("--alpha: expected {} modes", modes));
  const auto names = algebra::default_mode_names(modes);
  const auto h = algebra::parse_classical(c.h, names, parameters(c));
  if (!h.is_real_valued()) throw UsageError("--h: must be real-valued");
  const auto f = dynamics::dual_operator(c.k, h, c.order);
  const unsigned degree = f.degree();
  const auto basis = choose_basis(c, modes, {s}, degree);
  const double bound = fock::truncation_bound(s, basis, degree);
  if (bound > fock::kDefaultTruncationTolerance) {
    throw TruncationError(fmt::format("truncation inadequate: tail bound {:.3g} beyond cutoff - {}", bound, degree));
  }
  const auto v = fock::coherent_state(s, basis);
  const auto trace = fock::expectation(fock::build_matrix(f, basis), v);
  const double hs = h.evaluate(s.view()).real();
  const double target = std::exp(-c.k * hs);
  const double x = c.k * std::abs(hs);
  const double remainder = std::exp(std::max(0.0, -c.k * hs)) * std::pow(x, c.order + 1) / std::tgamma(c.order + 2.0);
  const double error = std::abs(trace - target);
  r.results = {{"basis", basis_json(basis)},
               {"terms", f.size()},
               {"degree", degree},
               {"h_of_state", hs},
               {"trace", complex_json(trace)},
               {"exp_minus_k_h", target},
               {"remainder_bound", remainder},
               {"error", error},
               {"truncation_bound_used", bound}};
  add_check(r, "dual_trace", error, remainder + c.tolerance.value_or(1e-9), "<=");
  dump(c, "polynomial", [&](std::ostream& out) { algebra::write_polynomial(out, f); });
}

Json config_json(const ExperimentConfig& c) {
  Json j = {{"seed", c.seed}, {"format", c.format}};
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  set("expr", c.expr);
  set("h", c.h);
  set("g", c.g);
  set("hamiltonian", c.hamiltonian);
  set("ensemble", c.ensemble);
  set("alpha", c.alpha);
  set("model", c.model_path);
  set("expect", c.expect);
  if (!c.params.empty()) j["params"] = c.params;
  if (c.modes) j["modes"] = *c.modes;
  if (c.energy) j["energy"] = *c.energy;
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  if (!c.cutoffs.empty()) j["cutoffs"] = c.cutoffs;
  const auto& s = c.subcommand;
  if (s == "quantize") j["rule"] = c.rule;
  if (s == "trace-check") j["max_degree"] = c.max_degree;
  if (s == "lattice-check" && c.model_path.empty()) {
    j["sites"] = c.sites;
    j["spacing"] = c.spacing;
    j["masses"] = c.masses;
    j["interaction"] = c.interaction;
  }
  if (s == "lattice-check") {
    j["configs"] = c.configs;
    j["amplitude"] = c.amplitude;
  }
  if (s == "incompressibility") {
    j["samples"] = c.samples;
    if (c.damped) j["damped_gamma"] = c.gamma;
  }
  if (s == "boltzmann") {
    j["k"] = c.k;
    j["count"] = c.count;
  }
  if (s == "invariance") {
    j["T"] = c.T;
    j["dt"] = c.dt;
  }
  if (s == "dual-check") {
    j["k"] = c.k;
    j["order"] = c.order;
  }
  return j;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string version() { return GSW_VERSION; }

Report run(const ExperimentConfig& config) {
  static const std::map<std::string, void (*)(const ExperimentConfig&, Report&)> commands{
      {"normal-order", normal_order_cmd},   {"quantize", quantize_cmd},
      {"spectrum", spectrum_cmd},           {"trace-check", trace_check_cmd},
      {"lattice-check", lattice_check_cmd}, {"incompressibility", incompressibility_cmd},
      {"boltzmann", boltzmann_cmd},         {"invariance", invariance_cmd},
      {"dual-check", dual_check_cmd}};
  const auto it = commands.find(config.subcommand);
  if (it == commands.end()) throw UsageError("unknown subcommand '" + config.subcommand + "'");
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.subcommand = config.subcommand;
  r.config = config_json(config);
  it->second(config, r);
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace gsw::cli
