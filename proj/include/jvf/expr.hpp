#ifndef JVF_EXPR_HPP
#define JVF_EXPR_HPP

// Small differentiable expression language: {+, -, *, /, ^n, sin, cos, exp,
// sqrt, numeric literals, pi, variables x and y}. Exact symbolic derivatives
// to arbitrary (bounded) order; this is the substrate for f, h and lambda.

#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace jvf {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset_)
      : std::runtime_error(msg + " at offset " + std::to_string(offset_)),
        offset(offset_) {}
  std::size_t offset;
};

struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

namespace ast {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace ast

class DiffExpr {
 public:
  DiffExpr() = default;

  // Evaluate with both chart variables bound. Unused bindings are ignored.
  double eval_xy(double x, double y) const;

  // Single-variable evaluation; requires the expression to use at most one
  // free variable (whatever its name), which is bound to v.
  double eval(double v) const;

  // Exact symbolic partial derivative of the given order (order <= 12).
  DiffExpr derivative(const std::string& var, int order) const;
  // Single-variable convenience: differentiates in the expression's variable.
  DiffExpr derivative(int order) const;

  const std::set<std::string>& variables() const { return vars_; }
  std::size_t variable_count() const { return vars_.size(); }

  // Canonical fully parenthesized serialization; re-parsing it reproduces the
  // AST structurally.
  std::string serialize() const;
  const std::string& source() const { return source_; }

  bool structurally_equal(const DiffExpr& other) const;

  bool empty() const { return !root_; }

 private:
  friend DiffExpr parse_expr(const std::string&);
  ast::NodePtr root_;
  std::string source_;
  std::set<std::string> vars_;
};

// Parse a source string. Throws ParseError (with byte offset) on bad input or
// unknown identifiers.
DiffExpr parse_expr(const std::string& source);

}  // namespace jvf

#endif  // JVF_EXPR_HPP
