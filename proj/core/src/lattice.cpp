#include "gsw/lattice.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "gsw/error.hpp"
#include "gsw/expression.hpp"
#include "gsw/ordering.hpp"

namespace gsw::lattice {

void LatticeModel::validate() const {
  if (sites == 0) throw PreconditionError("lattice needs at least one site");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw PreconditionError("lattice spacing must be positive");
  if (masses.empty()) throw PreconditionError("lattice needs at least one field");
  for (double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) throw PreconditionError("field masses must be positive (massless modes unsupported)");
  }
  if (interaction.degrees_of_freedom() != masses.size()) {
    throw PreconditionError("interaction must be written in one phi/pi pair per field");
  }
  if (interaction.degree() > 4) throw PreconditionError("interaction degree exceeds 4");
}

ModeTransform::ModeTransform(const LatticeModel& model)
    : sites_(model.sites), fields_(model.field_count()), spacing_(model.spacing) {
  model.validate();
  const std::size_t d = sites_;
  const double dd = static_cast<double>(d);
  basis_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  wave_.resize(d);
  std::size_t b = 0;
  for (unsigned k = 0; 2 * k <= d; ++k) {
    const bool single = k == 0 || 2 * k == d;
    for (int part = 0; part < (single ? 1 : 2); ++part, ++b) {
      wave_[b] = k;
      for (std::size_t x = 0; x < d; ++x) {
        const double angle = 2.0 * std::numbers::pi * k * static_cast<double>(x) / dd;
        double value = 0.0;
        if (k == 0) value = 1.0 / std::sqrt(dd);
        else if (2 * k == d) value = (x % 2 ? -1.0 : 1.0) / std::sqrt(dd);
        else value = std::sqrt(2.0 / dd) * (part == 0 ? std::cos(angle) : std::sin(angle));
        basis_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(x)) = value;
      }
    }
  }
  frequencies_.resize(fields_ * d);
  for (std::size_t j = 0; j < fields_; ++j) {
    for (std::size_t bb = 0; bb < d; ++bb) {
      const double p = lattice_momentum(bb);
      frequencies_[j * d + bb] = std::sqrt(model.masses[j] * model.masses[j] + p * p);
    }
  }
}

double ModeTransform::lattice_momentum(std::size_t b) const {
  return 2.0 * std::abs(std::sin(std::numbers::pi * wave_[b] / static_cast<double>(sites_))) / spacing_;
}

ClassicalState ModeTransform::forward(const FieldConfiguration& cfg) const {
  const std::size_t d = sites_;
  if (cfg.phi.size() != fields_ * d || cfg.pi.size() != fields_ * d) {
    throw ShapeError(fmt::format("configuration needs {} phi and pi values", fields_ * d));
  }
  const double root_a = std::sqrt(spacing_);
  std::vector<std::complex<double>> alpha(fields_ * d);
  for (std::size_t j = 0; j < fields_; ++j) {
    const Eigen::Map<const Eigen::VectorXd> phi(cfg.phi.data() + j * d, static_cast<Eigen::Index>(d));
    const Eigen::Map<const Eigen::VectorXd> pi(cfg.pi.data() + j * d, static_cast<Eigen::Index>(d));
    const Eigen::VectorXd phi_hat = basis_ * phi;
    const Eigen::VectorXd pi_hat = basis_ * pi;
    for (std::size_t b = 0; b < d; ++b) {
      const double w = frequencies_[j * d + b];
      const auto i = static_cast<Eigen::Index>(b);
      alpha[j * d + b] = root_a * std::complex<double>(std::sqrt(w / 2.0) * phi_hat(i), pi_hat(i) / std::sqrt(2.0 * w));
    }
  }
  return ClassicalState(std::move(alpha));
}

FieldConfiguration ModeTransform::inverse(const ClassicalState& s) const {
  const std::size_t d = sites_;
  if (s.number_of_modes() != fields_ * d) throw ShapeError(fmt::format("state needs {} modes", fields_ * d));
  const double root_a = std::sqrt(spacing_);
  FieldConfiguration cfg{std::vector<double>(fields_ * d), std::vector<double>(fields_ * d)};
  for (std::size_t j = 0; j < fields_; ++j) {
    Eigen::VectorXd phi_hat(static_cast<Eigen::Index>(d));
    Eigen::VectorXd pi_hat(static_cast<Eigen::Index>(d));
    for (std::size_t b = 0; b < d; ++b) {
      const double w = frequencies_[j * d + b];
      const auto a = s.amplitudes[j * d + b] / root_a;
      phi_hat(static_cast<Eigen::Index>(b)) = a.real() / std::sqrt(w / 2.0);
      pi_hat(static_cast<Eigen::Index>(b)) = a.imag() * std::sqrt(2.0 * w);
    }
    Eigen::Map<Eigen::VectorXd>(cfg.phi.data() + j * d, static_cast<Eigen::Index>(d)) = basis_.transpose() * phi_hat;
    Eigen::Map<Eigen::VectorXd>(cfg.pi.data() + j * d, static_cast<Eigen::Index>(d)) = basis_.transpose() * pi_hat;
  }
  return cfg;
}

ClassicalPolynomial ModeTransform::field_polynomial(std::size_t field, std::size_t site) const {
  // phi_hat = (al + conj(al)) / sqrt(2 a w)
  const std::size_t modes = fields_ * sites_;
  ClassicalPolynomial out(modes);
  for (std::size_t b = 0; b < sites_; ++b) {
    const std::size_t mode = field * sites_ + b;
    const double c = basis_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(site)) /
                     std::sqrt(2.0 * spacing_ * frequencies_[mode]);
    if (c == 0.0) continue;
    const auto s = Scalar::from_double(c);
    out += s * (ClassicalPolynomial::alpha(modes, mode) + ClassicalPolynomial::conj_alpha(modes, mode));
  }
  return out;
}

ClassicalPolynomial ModeTransform::momentum_polynomial(std::size_t field, std::size_t site) const {
  // pi_hat = -i sqrt(w / (2a)) (al - conj(al))
  const std::size_t modes = fields_ * sites_;
  ClassicalPolynomial out(modes);
  for (std::size_t b = 0; b < sites_; ++b) {
    const std::size_t mode = field * sites_ + b;
    const double c = basis_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(site)) *
                     std::sqrt(frequencies_[mode] / (2.0 * spacing_));
    if (c == 0.0) continue;
    const auto s = Scalar::from_complex({0.0, -c});
    out += s * (ClassicalPolynomial::alpha(modes, mode) - ClassicalPolynomial::conj_alpha(modes, mode));
  }
  return out;
}

ClassicalState mode_variables(const FieldConfiguration& cfg, const LatticeModel& model) {
  return ModeTransform(model).forward(cfg);
}

FieldConfiguration field_configuration(const ClassicalState& s, const LatticeModel& model) {
  return ModeTransform(model).inverse(s);
}

ClassicalPolynomial classical_hamiltonian(const LatticeModel& model) {
  const ModeTransform t(model);
  const std::size_t modes = model.number_of_modes();
  const std::size_t n = model.field_count();
  ClassicalPolynomial h(modes);
  for (std::size_t mode = 0; mode < modes; ++mode) {
    algebra::MonomialKey key(modes);
    key[mode] = {1, 1};
    h.add_term(key, Scalar::from_double(t.frequency(mode)));
  }
  if (model.interaction.is_zero()) return h;

  const auto a = Scalar::from_double(model.spacing);
  for (std::size_t x = 0; x < model.sites; ++x) {
    std::vector<ClassicalPolynomial> phi;
    std::vector<ClassicalPolynomial> pi;
    for (std::size_t j = 0; j < n; ++j) {
      phi.push_back(t.field_polynomial(j, x));
      pi.push_back(t.momentum_polynomial(j, x));
    }
    for (const auto& [key, c] : model.interaction.terms()) {
      auto term = ClassicalPolynomial::constant(modes, c * a);
      for (std::size_t j = 0; j < n; ++j) {
        if (key[j]) term *= pow(phi[j], key[j]);
        if (key[n + j]) term *= pow(pi[j], key[n + j]);
      }
      h += term;
    }
  }
  return h;
}

OperatorPolynomial normal_hamiltonian(const LatticeModel& model) {
  return algebra::normal_product(classical_hamiltonian(model));
}

PhasePolynomial real_space_hamiltonian(const LatticeModel& model) {
  model.validate();
  const std::size_t d = model.sites;
  const std::size_t n = model.field_count();
  const std::size_t dof = n * d;
  const auto a = Scalar::from_double(model.spacing);
  const auto half = Scalar::rational(1, 2);
  PhasePolynomial h(dof);
  for (std::size_t j = 0; j < n; ++j) {
    const auto m2 = Scalar::from_double(model.masses[j] * model.masses[j]);
    for (std::size_t x = 0; x < d; ++x) {
      const auto q = PhasePolynomial::coordinate(dof, j * d + x);
      const auto p = PhasePolynomial::momentum(dof, j * d + x);
      const auto next = PhasePolynomial::coordinate(dof, j * d + (x + 1) % d);
      const auto diff = next - q;
      h += half * a * (p * p) + half * a * m2 * (q * q);
      // a * (diff / a)^2 / 2 = diff^2 / (2a)
      h += Scalar::from_double(0.5 / model.spacing) * (diff * diff);
    }
  }
  for (std::size_t x = 0; x < d; ++x) {
    for (const auto& [key, c] : model.interaction.terms()) {
      auto term = PhasePolynomial::constant(dof, c * a);
      for (std::size_t j = 0; j < n; ++j) {
        if (key[j]) term *= pow(PhasePolynomial::coordinate(dof, j * d + x), key[j]);
        if (key[n + j]) term *= pow(PhasePolynomial::momentum(dof, j * d + x), key[n + j]);
      }
      h += term;
    }
  }
  return h;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> number_list(const std::string& value, std::size_t line) {
  std::string spaced = value;
  for (auto& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream in(spaced);
  std::vector<double> out;
  for (double x; in >> x;) out.push_back(x);
  if (!in.eof() || out.empty()) throw ParseError("expected a list of numbers", line);
  return out;
}

}  // namespace

ModelFile parse_model(std::istream& in) {
  ModelFile file;
  std::string interaction;
  std::vector<double> cutoffs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no - 1);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "sites") {
      const auto v = number_list(value, line_no - 1);
      if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) throw ParseError("sites must be a positive integer", line_no - 1);
      file.model.sites = static_cast<std::size_t>(v[0]);
    } else if (key == "spacing") {
      const auto v = number_list(value, line_no - 1);
      if (v.size() != 1) throw ParseError("spacing takes one value", line_no - 1);
      file.model.spacing = v[0];
    } else if (key == "masses") {
      file.model.masses = number_list(value, line_no - 1);
    } else if (key == "interaction") {
      interaction = value;
    } else if (key == "cutoff") {
      cutoffs = number_list(value, line_no - 1);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no - 1);
    }
  }
  const auto names = algebra::default_mode_names(file.model.field_count());
  file.model.interaction = interaction.empty() ? PhasePolynomial(file.model.field_count())
                                               : algebra::parse_phase(interaction, names);
  file.model.validate();
  const std::size_t modes = file.model.number_of_modes();
  if (!cutoffs.empty()) {
    if (cutoffs.size() != 1 && cutoffs.size() != modes) {
      throw PreconditionError(fmt::format("cutoff needs 1 or {} values", modes));
    }
    for (double c : cutoffs) {
      if (c < 1 || c != std::floor(c)) throw PreconditionError("cutoffs must be positive integers");
      file.cutoffs.push_back(static_cast<unsigned>(c));
    }
    if (file.cutoffs.size() == 1) file.cutoffs.assign(modes, file.cutoffs.front());
  }
  return file;
}

ModelFile parse_model_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_model(in);
}

}  // namespace gsw::lattice
