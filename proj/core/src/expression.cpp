#include "gsw/expression.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <memory>
#include <optional>

#include "gsw/error.hpp"

namespace gsw::algebra {
namespace {

enum class SymbolKind { Annihilation, Creation, Alpha, Coordinate, Momentum };

enum class Family { Scalar, Ladder, Alpha, Phase };

Family family_of(SymbolKind k) {
  switch (k) {
    case SymbolKind::Annihilation:
    case SymbolKind::Creation:
      return Family::Ladder;
    case SymbolKind::Alpha:
      return Family::Alpha;
    default:
      return Family::Phase;
  }
}

struct Node {
  enum class Op { Number, Symbol, Add, Sub, Mul, Neg, Pow, Conj };
  Op op = Op::Number;
  std::size_t position = 0;
  Scalar value;
  SymbolKind symbol = SymbolKind::Alpha;
  std::size_t mode = 0;
  unsigned exponent = 0;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

using NodePtr = std::unique_ptr<Node>;

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Exact value of a decimal literal when it fits; floating otherwise.
Scalar decimal_literal(std::string_view text) {
  std::int64_t mantissa = 0;
  std::int64_t scale_pow10 = 0;
  bool exact = true;
  std::size_t i = 0;
  bool after_point = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    if (text[i] == '.') {
      after_point = true;
      continue;
    }
    const int digit = text[i] - '0';
    if (mantissa > (std::numeric_limits<std::int64_t>::max() - digit) / 10) {
      exact = false;
      break;
    }
    mantissa = mantissa * 10 + digit;
    if (after_point) --scale_pow10;
  }
  if (exact && i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    int e = 0;
    auto rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
    if (ec != std::errc{}) exact = false;
    scale_pow10 += e;
  }
  if (exact && scale_pow10 >= -18 && scale_pow10 <= 18) {
    std::int64_t p = 1;
    for (std::int64_t k = 0; k < (scale_pow10 < 0 ? -scale_pow10 : scale_pow10); ++k) p *= 10;
    if (scale_pow10 >= 0) {
      if (mantissa == 0 || mantissa <= std::numeric_limits<std::int64_t>::max() / p) {
        return Scalar(mantissa * p);
      }
    } else {
      return Scalar::rational(mantissa, p);
    }
  }
  const std::string copy(text);
  return Scalar::from_double(std::strtod(copy.c_str(), nullptr));
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> mode_names, const ParameterMap& parameters)
      : text_(text), names_(mode_names), params_(parameters) {
    if (mode_names.empty()) throw PreconditionError("mode_names must be nonempty");
  }

  NodePtr parse() {
    NodePtr root = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const { throw ParseError(message, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Op op, NodePtr lhs, NodePtr rhs, std::size_t at) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->position = at;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    while (true) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = binary(Node::Op::Add, std::move(lhs), parse_product(), at);
      } else if (accept('-')) {
        lhs = binary(Node::Op::Sub, std::move(lhs), parse_product(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    while (true) {
      skip_ws();
      const std::size_t at = pos_;
      if (!accept('*')) return lhs;
      lhs = binary(Node::Op::Mul, std::move(lhs), parse_unary(), at);
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) {
      auto n = std::make_unique<Node>();
      n->op = Node::Op::Neg;
      n->position = at;
      n->lhs = parse_unary();
      return n;
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a nonnegative integer literal");
    unsigned exponent = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
    if (ec != std::errc{} || exponent > 64) fail_at("exponent out of range", start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') fail("chained powers need parentheses");
    auto n = std::make_unique<Node>();
    n->op = Node::Op::Pow;
    n->position = at;
    n->exponent = exponent;
    n->lhs = std::move(base);
    return n;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    auto n = std::make_unique<Node>();
    n->position = start;
    n->value = decimal_literal(text_.substr(start, pos_ - start));
    if (pos_ < text_.size() && text_[pos_] == 'i' && (pos_ + 1 >= text_.size() || !is_ident_char(text_[pos_ + 1]))) {
      ++pos_;
      n->value *= Scalar::imaginary_unit();
    }
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) fail("missing '*' between number and symbol");
    return n;
  }

  std::optional<std::size_t> mode_of(std::string_view label) const {
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (names_[j] == label) return j;
    }
    return std::nullopt;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);

    auto n = std::make_unique<Node>();
    n->position = start;
    if (ident == "i") {
      n->value = Scalar::imaginary_unit();
      return n;
    }
    if (ident == "conj") {
      if (!accept('(')) fail("expected '(' after conj");
      n->op = Node::Op::Conj;
      n->lhs = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (auto it = params_.find(ident); it != params_.end()) {
      n->value = it->second;
      return n;
    }
    static constexpr std::pair<std::string_view, SymbolKind> kPrefixes[] = {
        {"phi", SymbolKind::Coordinate}, {"pi", SymbolKind::Momentum}, {"ad", SymbolKind::Creation},
        {"al", SymbolKind::Alpha},       {"a", SymbolKind::Annihilation}, {"q", SymbolKind::Coordinate},
        {"p", SymbolKind::Momentum},
    };
    for (const auto& [prefix, kind] : kPrefixes) {
      if (ident.size() > prefix.size() && ident.starts_with(prefix)) {
        if (auto mode = mode_of(ident.substr(prefix.size()))) {
          n->op = Node::Op::Symbol;
          n->symbol = kind;
          n->mode = *mode;
          return n;
        }
      }
    }
    fail_at("unknown symbol '" + std::string(ident) + "'", start);
  }

  std::string_view text_;
  std::span<const std::string> names_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

struct Classification {
  Family family = Family::Scalar;
  bool has_conj = false;
  std::size_t conj_position = 0;
};

void classify(const Node& n, Classification& c) {
  if (n.op == Node::Op::Symbol) {
    const Family f = family_of(n.symbol);
    if (c.family != Family::Scalar && c.family != f) {
      throw ParseError("cannot mix ladder, classical and phase-space symbols in one expression", n.position);
    }
    c.family = f;
  }
  if (n.op == Node::Op::Conj && !c.has_conj) {
    c.has_conj = true;
    c.conj_position = n.position;
  }
  if (n.lhs) classify(*n.lhs, c);
  if (n.rhs) classify(*n.rhs, c);
}

// Per-algebra construction hooks for the generic evaluator below.
template <class P>
struct Algebra;

template <>
struct Algebra<OperatorPolynomial> {
  static OperatorPolynomial constant(std::size_t m, const Scalar& v) { return OperatorPolynomial::constant(m, v); }
  static OperatorPolynomial symbol(std::size_t m, const Node& n) {
    return n.symbol == SymbolKind::Creation ? OperatorPolynomial::creation(m, n.mode)
                                            : OperatorPolynomial::annihilation(m, n.mode);
  }
  static OperatorPolynomial times(const OperatorPolynomial& a, const OperatorPolynomial& b) { return multiply(a, b); }
  static OperatorPolynomial conj(const OperatorPolynomial&, const Node& n) {
    throw ParseError("conj() applies to classical expressions", n.position);
  }
};

template <>
struct Algebra<RawOperatorSum> {
  static RawOperatorSum constant(std::size_t m, const Scalar& v) { return RawOperatorSum::constant(m, v); }
  static RawOperatorSum symbol(std::size_t m, const Node& n) {
    return RawOperatorSum::factor(m, LadderFactor{static_cast<std::uint32_t>(n.mode), n.symbol == SymbolKind::Creation});
  }
  static RawOperatorSum times(const RawOperatorSum& a, const RawOperatorSum& b) { return a * b; }
  static RawOperatorSum conj(const RawOperatorSum&, const Node& n) {
    throw ParseError("conj() applies to classical expressions", n.position);
  }
};

template <>
struct Algebra<ClassicalPolynomial> {
  static ClassicalPolynomial constant(std::size_t m, const Scalar& v) { return ClassicalPolynomial::constant(m, v); }
  static ClassicalPolynomial symbol(std::size_t m, const Node& n) { return ClassicalPolynomial::alpha(m, n.mode); }
  static ClassicalPolynomial times(const ClassicalPolynomial& a, const ClassicalPolynomial& b) { return a * b; }
  static ClassicalPolynomial conj(const ClassicalPolynomial& a, const Node&) { return a.conj(); }
};

template <>
struct Algebra<PhasePolynomial> {
  static PhasePolynomial constant(std::size_t m, const Scalar& v) {
    if (!v.is_real()) throw PreconditionError("phase-space expressions take real coefficients");
    return PhasePolynomial::constant(m, v);
  }
  static PhasePolynomial symbol(std::size_t m, const Node& n) {
    return n.symbol == SymbolKind::Coordinate ? PhasePolynomial::coordinate(m, n.mode)
                                              : PhasePolynomial::momentum(m, n.mode);
  }
  static PhasePolynomial times(const PhasePolynomial& a, const PhasePolynomial& b) { return a * b; }
  // Real-valued, so conjugation is the identity.
  static PhasePolynomial conj(const PhasePolynomial& a, const Node&) { return a; }
};

template <class P>
P evaluate(const Node& n, std::size_t modes) {
  using A = Algebra<P>;
  switch (n.op) {
    case Node::Op::Number:
      return A::constant(modes, n.value);
    case Node::Op::Symbol:
      return A::symbol(modes, n);
    case Node::Op::Add: {
      P out = evaluate<P>(*n.lhs, modes);
      out += evaluate<P>(*n.rhs, modes);
      return out;
    }
    case Node::Op::Sub: {
      P out = evaluate<P>(*n.lhs, modes);
      P rhs = evaluate<P>(*n.rhs, modes);
      rhs *= Scalar(-1);
      out += rhs;
      return out;
    }
    case Node::Op::Mul:
      return A::times(evaluate<P>(*n.lhs, modes), evaluate<P>(*n.rhs, modes));
    case Node::Op::Neg: {
      P out = evaluate<P>(*n.lhs, modes);
      out *= Scalar(-1);
      return out;
    }
    case Node::Op::Pow: {
      const P base = evaluate<P>(*n.lhs, modes);
      P out = A::constant(modes, 1);
      for (unsigned k = 0; k < n.exponent; ++k) out = A::times(out, base);
      return out;
    }
    case Node::Op::Conj:
      return A::conj(evaluate<P>(*n.lhs, modes), n);
  }
  throw Error("unreachable expression node");
}

Classification parse_and_classify(std::string_view text, std::span<const std::string> names,
                                  const ParameterMap& params, NodePtr& root) {
  root = Parser(text, names, params).parse();
  Classification c;
  classify(*root, c);
  return c;
}

void require_family(const Classification& c, Family wanted, const char* what) {
  if (c.family != Family::Scalar && c.family != wanted) {
    throw ParseError(std::string("expected ") + what + " expression", 0);
  }
}

}  // namespace

ParsedExpression parse_expression(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters) {
  NodePtr root;
  const auto c = parse_and_classify(text, mode_names, parameters, root);
  switch (c.family) {
    case Family::Ladder:
      return evaluate<OperatorPolynomial>(*root, mode_names.size());
    case Family::Phase:
      return evaluate<PhasePolynomial>(*root, mode_names.size());
    default:
      return evaluate<ClassicalPolynomial>(*root, mode_names.size());
  }
}

OperatorPolynomial parse_operator(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters) {
  NodePtr root;
  const auto c = parse_and_classify(text, mode_names, parameters, root);
  require_family(c, Family::Ladder, "ladder-operator");
  return evaluate<OperatorPolynomial>(*root, mode_names.size());
}

RawOperatorSum parse_raw_operator(std::string_view text, std::span<const std::string> mode_names,
                                  const ParameterMap& parameters) {
  NodePtr root;
  const auto c = parse_and_classify(text, mode_names, parameters, root);
  require_family(c, Family::Ladder, "ladder-operator");
  return evaluate<RawOperatorSum>(*root, mode_names.size());
}

ClassicalPolynomial parse_classical(std::string_view text, std::span<const std::string> mode_names,
                                    const ParameterMap& parameters) {
  NodePtr root;
  const auto c = parse_and_classify(text, mode_names, parameters, root);
  require_family(c, Family::Alpha, "classical");
  return evaluate<ClassicalPolynomial>(*root, mode_names.size());
}

PhasePolynomial parse_phase(std::string_view text, std::span<const std::string> mode_names,
                            const ParameterMap& parameters) {
  NodePtr root;
  const auto c = parse_and_classify(text, mode_names, parameters, root);
  require_family(c, Family::Phase, "phase-space");
  return evaluate<PhasePolynomial>(*root, mode_names.size());
}

std::size_t infer_mode_count(std::string_view text) {
  std::size_t count = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.') {
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      continue;
    }
    if (!is_ident_start(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && is_ident_char(text[i])) ++i;
    std::string_view ident = text.substr(start, i - start);
    std::size_t digits = ident.size();
    while (digits > 0 && std::isdigit(static_cast<unsigned char>(ident[digits - 1]))) --digits;
    if (digits == ident.size() || digits == 0) continue;
    std::size_t label = 0;
    std::from_chars(ident.data() + digits, ident.data() + ident.size(), label);
    count = std::max(count, label + 1);
  }
  return count;
}

}  // namespace gsw::algebra
