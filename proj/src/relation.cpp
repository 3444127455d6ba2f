#include "gtd/relation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "gtd/errors.hpp"

namespace gtd {

bool operator==(const RelationNode& a, const RelationNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case RelationNode::Kind::Number:
      if (a.number != b.number) return false;
      break;
    case RelationNode::Kind::Variable:
    case RelationNode::Kind::Parameter:
      if (a.index != b.index) return false;
      break;
    case RelationNode::Kind::Call:
      if (a.function != b.function) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

namespace {

struct Token {
  enum class Kind { Number, Ident, Op, End };
  Kind kind;
  std::string text;
  std::size_t pos;
  double number = 0.0;
};

const std::vector<std::pair<std::string, Function>> kFunctions = {
    {"ln", Function::Ln},     {"exp", Function::Exp},   {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh}, {"cosh", Function::Cosh}, {"tanh", Function::Tanh},
    {"pow", Function::Pow},
};

const char* function_name(Function f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name.c_str();
  return "?";
}

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      Token t{Token::Kind::Number, src.substr(i, j - i), i};
      auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, t.number);
      if (ec != std::errc() || ptr != src.data() + j) throw ParseError(i, {"number"}, "'" + t.text + "'");
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, src.substr(i, j - i), i});
      i = j;
      continue;
    }
    if ((c == '>' || c == '<') && i + 1 < src.size() && src[i + 1] == '=') {
      out.push_back({Token::Kind::Op, src.substr(i, 2), i});
      i += 2;
      continue;
    }
    if (std::string_view("+-*/^(),<>").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Op, std::string(1, c), i});
      ++i;
      continue;
    }
    throw ParseError(i, {"number", "identifier", "operator"}, std::string("'") + c + "'");
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

NodePtr make_binary(RelationNode::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<RelationNode>();
  n->kind = kind;
  n->args = {std::move(lhs), std::move(rhs)};
  return n;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& coords,
         const std::vector<std::string>& params)
      : tokens_(std::move(tokens)), coords_(coords), params_(params) {}

  NodePtr expression() {
    NodePtr lhs = term();
    while (peek_op("+") || peek_op("-")) {
      const bool add = next().text == "+";
      lhs = make_binary(add ? RelationNode::Kind::Add : RelationNode::Kind::Sub, lhs, term());
    }
    return lhs;
  }

  const Token& peek() const { return tokens_[pos_]; }
  bool peek_op(std::string_view op) const {
    return peek().kind == Token::Kind::Op && peek().text == op;
  }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.pos, std::move(expected),
                     t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'");
  }

  void expect(std::string_view op) {
    if (!peek_op(op)) fail({"'" + std::string(op) + "'"});
    ++pos_;
  }

 private:
  NodePtr term() {
    NodePtr lhs = unary();
    while (peek_op("*") || peek_op("/")) {
      const bool mul = next().text == "*";
      lhs = make_binary(mul ? RelationNode::Kind::Mul : RelationNode::Kind::Div, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek_op("-")) {
      ++pos_;
      auto n = std::make_shared<RelationNode>();
      n->kind = RelationNode::Kind::Neg;
      n->args = {unary()};
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek_op("^")) {
      ++pos_;
      return make_binary(RelationNode::Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      ++pos_;
      auto n = std::make_shared<RelationNode>();
      n->kind = RelationNode::Kind::Number;
      n->number = t.number;
      n->name = t.text;
      return n;
    }
    if (peek_op("(")) {
      ++pos_;
      NodePtr inner = expression();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::Ident) {
      ++pos_;
      auto n = std::make_shared<RelationNode>();
      n->name = t.text;
      auto fn = std::find_if(kFunctions.begin(), kFunctions.end(),
                             [&](const auto& f) { return f.first == t.text; });
      if (fn != kFunctions.end() && peek_op("(")) {
        ++pos_;
        n->kind = RelationNode::Kind::Call;
        n->function = fn->second;
        n->args.push_back(expression());
        if (fn->second == Function::Pow) {
          expect(",");
          n->args.push_back(expression());
        }
        expect(")");
        return n;
      }
      if (auto c = std::find(coords_.begin(), coords_.end(), t.text); c != coords_.end()) {
        n->kind = RelationNode::Kind::Variable;
        n->index = static_cast<std::size_t>(c - coords_.begin());
        return n;
      }
      if (auto p = std::find(params_.begin(), params_.end(), t.text); p != params_.end()) {
        n->kind = RelationNode::Kind::Parameter;
        n->index = static_cast<std::size_t>(p - params_.begin());
        return n;
      }
      throw Error(ErrorKind::UnknownIdentifier,
                  "unknown identifier '" + t.text + "' at position " + std::to_string(t.pos));
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::vector<std::string>& coords_;
  const std::vector<std::string>& params_;
};

void check_names(const std::vector<std::string>& coords, const std::vector<std::string>& params) {
  auto all = coords;
  all.insert(all.end(), params.begin(), params.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw Error(ErrorKind::InvalidArgument, "coordinate and parameter names must be unique");
}

// Numeric operations shared by the double and Taylor evaluation paths. The
// domain test always looks at the value slot.
double value_of(double x) { return x; }
double value_of(const Taylor& x) { return x.value(); }

template <typename T>
T apply_function(Function f, const T& x) {
  using std::cosh, std::exp, std::log, std::sinh, std::sqrt, std::tanh;
  const double v = value_of(x);
  switch (f) {
    case Function::Ln:
      if (!(v > 0.0)) throw DomainViolation("ln of non-positive argument", {"ln argument > 0"});
      return log(x);
    case Function::Exp: return exp(x);
    case Function::Sqrt:
      if (v < 0.0) throw DomainViolation("sqrt of negative argument", {"sqrt argument >= 0"});
      return sqrt(x);
    case Function::Sinh: return sinh(x);
    case Function::Cosh: return cosh(x);
    case Function::Tanh: return tanh(x);
    case Function::Pow: break;
  }
  throw Error(ErrorKind::InvalidArgument, "bad unary function");
}

double power(double base, double exponent) {
  if (base < 0.0 && std::floor(exponent) != exponent)
    throw DomainViolation("negative base with non-integer exponent", {"pow base >= 0"});
  if (base == 0.0 && exponent < 0.0)
    throw DomainViolation("zero base with negative exponent", {"pow base != 0"});
  return std::pow(base, exponent);
}

Taylor power(const Taylor& base, const Taylor& exponent) {
  const double b = base.value();
  if (exponent.is_constant()) {
    power(b, exponent.value());
    return pow(base, exponent.value());
  }
  if (!(b > 0.0)) throw DomainViolation("variable exponent needs a positive base", {"pow base > 0"});
  return pow(base, exponent);
}

template <typename T>
T divide(const T& a, const T& b) {
  if (value_of(b) == 0.0) throw DomainViolation("division by zero", {"denominator != 0"});
  return a / b;
}

template <typename T>
T eval_node(const RelationNode& n, std::span<const T> x, std::span<const double> params) {
  using K = RelationNode::Kind;
  switch (n.kind) {
    case K::Number: return T(n.number);
    case K::Variable: return x[n.index];
    case K::Parameter: return T(params[n.index]);
    case K::Add: return eval_node(*n.args[0], x, params) + eval_node(*n.args[1], x, params);
    case K::Sub: return eval_node(*n.args[0], x, params) - eval_node(*n.args[1], x, params);
    case K::Mul: return eval_node(*n.args[0], x, params) * eval_node(*n.args[1], x, params);
    case K::Div: return divide(eval_node(*n.args[0], x, params), eval_node(*n.args[1], x, params));
    case K::Pow: return power(eval_node(*n.args[0], x, params), eval_node(*n.args[1], x, params));
    case K::Neg: return -eval_node(*n.args[0], x, params);
    case K::Call:
      if (n.function == Function::Pow)
        return power(eval_node(*n.args[0], x, params), eval_node(*n.args[1], x, params));
      return apply_function(n.function, eval_node(*n.args[0], x, params));
  }
  throw Error(ErrorKind::InvalidArgument, "bad relation node");
}

void print_node(const RelationAst& ast, const RelationNode& n, std::string& out) {
  using K = RelationNode::Kind;
  auto binary = [&](const char* op) {
    out += '(';
    print_node(ast, *n.args[0], out);
    out += op;
    print_node(ast, *n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      break;
    }
    case K::Variable: out += ast.coords[n.index]; break;
    case K::Parameter: out += ast.params[n.index]; break;
    case K::Add: binary(" + "); break;
    case K::Sub: binary(" - "); break;
    case K::Mul: binary(" * "); break;
    case K::Div: binary(" / "); break;
    case K::Pow: binary("^"); break;
    case K::Neg:
      out += "(-";
      print_node(ast, *n.args[0], out);
      out += ')';
      break;
    case K::Call:
      out += function_name(n.function);
      out += '(';
      print_node(ast, *n.args[0], out);
      if (n.args.size() > 1) {
        out += ", ";
        print_node(ast, *n.args[1], out);
      }
      out += ')';
      break;
  }
}

class CompiledRelation final : public ScalarField {
 public:
  CompiledRelation(RelationAst ast, std::vector<double> params)
      : ast_(std::move(ast)), params_(std::move(params)) {}

  std::size_t dimension() const override { return ast_.coords.size(); }
  double evaluate(std::span<const double> x) const override {
    return eval_node<double>(*ast_.root, x, params_);
  }
  Taylor evaluate(std::span<const Taylor> x) const override {
    return eval_node<Taylor>(*ast_.root, x, params_);
  }

 private:
  RelationAst ast_;
  std::vector<double> params_;
};

}  // namespace

RelationAst parse_relation(const std::string& source, const std::vector<std::string>& coords,
                           const std::vector<std::string>& params) {
  check_names(coords, params);
  Parser parser(tokenize(source), coords, params);
  if (parser.peek().kind == Token::Kind::End) parser.fail({"expression"});
  NodePtr root = parser.expression();
  if (parser.peek().kind != Token::Kind::End) parser.fail({"operator", "end of input"});
  return RelationAst{std::move(root), coords, params, source};
}

std::string pretty_print(const RelationAst& ast) {
  std::string out;
  print_node(ast, *ast.root, out);
  return out;
}

double evaluate(const RelationAst& ast, std::span<const double> x, std::span<const double> params) {
  return eval_node<double>(*ast.root, x, params);
}

ScalarFieldEvaluator compile(const RelationAst& ast, const std::map<std::string, double>& values) {
  std::vector<double> bound;
  bound.reserve(ast.params.size());
  for (const auto& name : ast.params) {
    auto it = values.find(name);
    if (it == values.end()) throw Error(ErrorKind::UnboundParameter, "parameter '" + name + "' has no value");
    bound.push_back(it->second);
  }
  return std::make_shared<CompiledRelation>(ast, std::move(bound));
}

Predicate Predicate::parse(const std::string& text, const std::vector<std::string>& coords,
                           const std::vector<std::string>& params) {
  // Split at the single top-level comparison operator.
  std::size_t at = std::string::npos;
  std::size_t width = 1;
  Op op = Op::Greater;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '>' && text[i] != '<') continue;
    if (at != std::string::npos) throw ParseError(i, {"single comparison"}, "second comparison");
    at = i;
    const bool eq = i + 1 < text.size() && text[i + 1] == '=';
    width = eq ? 2 : 1;
    op = text[i] == '>' ? (eq ? Op::GreaterEq : Op::Greater) : (eq ? Op::LessEq : Op::Less);
  }
  if (at == std::string::npos) throw ParseError(text.size(), {"'>'", "'>='", "'<'", "'<='"}, "end of input");
  Predicate p;
  p.text_ = text;
  p.op_ = op;
  p.lhs_ = parse_relation(text.substr(0, at), coords, params);
  try {
    p.rhs_ = parse_relation(text.substr(at + width), coords, params);
  } catch (const ParseError& e) {
    throw ParseError(e.position() + at + width, e.expected(), e.found());
  }
  return p;
}

bool Predicate::holds(std::span<const double> x, std::span<const double> params) const {
  double l = 0.0;
  double r = 0.0;
  try {
    l = evaluate(lhs_, x, params);
    r = evaluate(rhs_, x, params);
  } catch (const Error&) {
    return false;
  }
  switch (op_) {
    case Op::Greater: return l > r;
    case Op::GreaterEq: return l >= r;
    case Op::Less: return l < r;
    case Op::LessEq: return l <= r;
  }
  return false;
}

}  // namespace gtd
