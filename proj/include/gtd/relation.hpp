#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gtd/jets.hpp"

namespace gtd {

enum class Function { Ln, Exp, Sqrt, Sinh, Cosh, Tanh, Pow };

struct RelationNode;
using NodePtr = std::shared_ptr<const RelationNode>;

struct RelationNode {
  enum class Kind { Number, Variable, Parameter, Add, Sub, Mul, Div, Pow, Neg, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::size_t index = 0;  // coordinate or parameter slot
  std::string name;       // identifier as written, for printing
  Function function = Function::Ln;
  std::vector<NodePtr> args;

  friend bool operator==(const RelationNode& a, const RelationNode& b);
};

/// A parsed fundamental relation. Variables and parameters are resolved to
/// slots in `coords` and `params`.
struct RelationAst {
  NodePtr root;
  std::vector<std::string> coords;
  std::vector<std::string> params;
  std::string source;

  friend bool operator==(const RelationAst& a, const RelationAst& b) {
    return a.coords == b.coords && a.params == b.params && *a.root == *b.root;
  }
};

/// Infix grammar: + - * / ^ (right-associative), unary minus binding looser
/// than ^, parentheses, and ln exp sqrt sinh cosh tanh pow(x, y).
RelationAst parse_relation(const std::string& source, const std::vector<std::string>& coords,
                           const std::vector<std::string>& params);

/// Fully parenthesized text that reparses to a structurally identical tree.
std::string pretty_print(const RelationAst& ast);

/// Evaluate over plain reals. Throws DomainViolation for ln/sqrt/pow/division
/// outside their domain.
double evaluate(const RelationAst& ast, std::span<const double> x, std::span<const double> params);

/// Bind parameters. Throws UnboundParameter when any parameter lacks a value.
ScalarFieldEvaluator compile(const RelationAst& ast, const std::map<std::string, double>& param_values);

/// `lhs op rhs` with op one of > >= < <=, both sides relation expressions.
class Predicate {
 public:
  enum class Op { Greater, GreaterEq, Less, LessEq };

  static Predicate parse(const std::string& text, const std::vector<std::string>& coords,
                         const std::vector<std::string>& params);

  /// False when the inequality fails or either side cannot be evaluated.
  bool holds(std::span<const double> x, std::span<const double> params) const;
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  RelationAst lhs_, rhs_;
  Op op_ = Op::Greater;
};

}  // namespace gtd
