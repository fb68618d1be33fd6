#include "jvf/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace jvf {
namespace ast {

enum class Kind { Num, Pi, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sqrt };

struct Node {
  Kind kind;
  double value = 0.0;      // Num
  std::string name;        // Var
  int exponent = 0;        // Pow
  NodePtr a, b;            // children
};

// builder handle: mutable while under construction, stored as NodePtr (const)
static std::shared_ptr<Node> mk(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

static NodePtr num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->value = v;
  return n;
}

static bool is_num(const NodePtr& n, double v) {
  return n->kind == Kind::Num && n->value == v;
}

// Smart constructors fold constants and trivial identities so that repeated
// differentiation does not blow the tree up.
static NodePtr add(NodePtr a, NodePtr b) {
  if (is_num(a, 0)) return b;
  if (is_num(b, 0)) return a;
  if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->value + b->value);
  auto n = mk(Kind::Add); n->a = std::move(a); n->b = std::move(b); return n;
}
static NodePtr sub(NodePtr a, NodePtr b) {
  if (is_num(b, 0)) return a;
  if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->value - b->value);
  auto n = mk(Kind::Sub); n->a = std::move(a); n->b = std::move(b); return n;
}
static NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Num) return num(-a->value);
  if (a->kind == Kind::Neg) return a->a;
  auto n = mk(Kind::Neg); n->a = std::move(a); return n;
}
static NodePtr mul(NodePtr a, NodePtr b) {
  if (is_num(a, 0) || is_num(b, 0)) return num(0);
  if (is_num(a, 1)) return b;
  if (is_num(b, 1)) return a;
  if (a->kind == Kind::Num && b->kind == Kind::Num) return num(a->value * b->value);
  auto n = mk(Kind::Mul); n->a = std::move(a); n->b = std::move(b); return n;
}
static NodePtr divide(NodePtr a, NodePtr b) {
  if (is_num(a, 0) && !is_num(b, 0)) return num(0);
  if (is_num(b, 1)) return a;
  auto n = mk(Kind::Div); n->a = std::move(a); n->b = std::move(b); return n;
}
static NodePtr powi(NodePtr a, int e) {
  if (e == 0) return num(1);
  if (e == 1) return a;
  auto n = mk(Kind::Pow); n->a = std::move(a); n->exponent = e; return n;
}
static NodePtr fun(Kind k, NodePtr a) { auto n = mk(k); n->a = std::move(a); return n; }

// ---------------------------------------------------------------------------
// Evaluation

static double eval_node(const Node& n, double x, double y) {
  switch (n.kind) {
    case Kind::Num: return n.value;
    case Kind::Pi: return M_PI;
    case Kind::Var: return n.name == "x" ? x : y;
    case Kind::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
    case Kind::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
    case Kind::Neg: return -eval_node(*n.a, x, y);
    case Kind::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
    case Kind::Div: {
      const double den = eval_node(*n.b, x, y);
      if (den == 0.0) throw EvalError("division by zero");
      return eval_node(*n.a, x, y) / den;
    }
    case Kind::Pow: {
      const double base = eval_node(*n.a, x, y);
      if (n.exponent < 0 && base == 0.0) throw EvalError("division by zero");
      return std::pow(base, n.exponent);
    }
    case Kind::Sin: return std::sin(eval_node(*n.a, x, y));
    case Kind::Cos: return std::cos(eval_node(*n.a, x, y));
    case Kind::Exp: return std::exp(eval_node(*n.a, x, y));
    case Kind::Sqrt: {
      const double arg = eval_node(*n.a, x, y);
      if (arg < 0.0) throw EvalError("sqrt of negative argument");
      return std::sqrt(arg);
    }
  }
  throw EvalError("corrupt expression tree");
}

// ---------------------------------------------------------------------------
// Differentiation

static NodePtr diff(const NodePtr& n, const std::string& var) {
  switch (n->kind) {
    case Kind::Num:
    case Kind::Pi:
      return num(0);
    case Kind::Var: return num(n->name == var ? 1 : 0);
    case Kind::Add: return add(diff(n->a, var), diff(n->b, var));
    case Kind::Sub: return sub(diff(n->a, var), diff(n->b, var));
    case Kind::Neg: return neg(diff(n->a, var));
    case Kind::Mul:
      return add(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var)));
    case Kind::Div:
      // (a/b)' = a'/b - a b'/b^2
      return sub(divide(diff(n->a, var), n->b),
                 divide(mul(n->a, diff(n->b, var)), powi(n->b, 2)));
    case Kind::Pow:
      return mul(mul(num(n->exponent), powi(n->a, n->exponent - 1)), diff(n->a, var));
    case Kind::Sin: return mul(fun(Kind::Cos, n->a), diff(n->a, var));
    case Kind::Cos: return neg(mul(fun(Kind::Sin, n->a), diff(n->a, var)));
    case Kind::Exp: return mul(fun(Kind::Exp, n->a), diff(n->a, var));
    case Kind::Sqrt:
      // rejected at runtime when the argument vanishes (division by zero)
      return divide(diff(n->a, var), mul(num(2), fun(Kind::Sqrt, n->a)));
  }
  throw EvalError("corrupt expression tree");
}

// ---------------------------------------------------------------------------
// Serialization and structural equality

static void serialize_node(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case Kind::Num: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << tmp.str();
      return;
    }
    case Kind::Pi: os << "pi"; return;
    case Kind::Var: os << n.name; return;
    case Kind::Add: os << '('; serialize_node(*n.a, os); os << '+'; serialize_node(*n.b, os); os << ')'; return;
    case Kind::Sub: os << '('; serialize_node(*n.a, os); os << '-'; serialize_node(*n.b, os); os << ')'; return;
    case Kind::Neg: os << "(-"; serialize_node(*n.a, os); os << ')'; return;
    case Kind::Mul: os << '('; serialize_node(*n.a, os); os << '*'; serialize_node(*n.b, os); os << ')'; return;
    case Kind::Div: os << '('; serialize_node(*n.a, os); os << '/'; serialize_node(*n.b, os); os << ')'; return;
    case Kind::Pow: os << '('; serialize_node(*n.a, os); os << '^' << n.exponent << ')'; return;
    case Kind::Sin: os << "sin("; serialize_node(*n.a, os); os << ')'; return;
    case Kind::Cos: os << "cos("; serialize_node(*n.a, os); os << ')'; return;
    case Kind::Exp: os << "exp("; serialize_node(*n.a, os); os << ')'; return;
    case Kind::Sqrt: os << "sqrt("; serialize_node(*n.a, os); os << ')'; return;
  }
}

static bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Num: return a.value == b.value;
    case Kind::Pi: return true;
    case Kind::Var: return a.name == b.name;
    case Kind::Pow: return a.exponent == b.exponent && equal_nodes(*a.a, *b.a);
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Sqrt:
      return equal_nodes(*a.a, *b.a);
    default:
      return equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b);
  }
}

static void collect_vars(const Node& n, std::set<std::string>& out) {
  if (n.kind == Kind::Var) out.insert(n.name);
  if (n.a) collect_vars(*n.a, out);
  if (n.b) collect_vars(*n.b, out);
}

// ---------------------------------------------------------------------------
// Parser: usual arithmetic precedence, whitespace-insensitive.

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() { while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_; }
  char peek() { skip_ws(); return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool accept(char c) { if (peek() == c) { ++pos_; return true; } return false; }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(lhs, term());
      else if (accept('-')) lhs = sub(lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = mul(lhs, unary());
      else if (accept('/')) lhs = divide(lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      bool negexp = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        negexp = (s_[pos_] == '-');
        ++pos_;
        skip_ws();
      }
      if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_]))
        throw ParseError("exponent must be an integer literal", at);
      long e = 0;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
        e = e * 10 + (s_[pos_] - '0');
        if (e > 64) throw ParseError("exponent too large", at);
        ++pos_;
      }
      return powi(base, negexp ? int(-e) : int(e));
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c)) return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t at = pos_;
    while (pos_ < s_.size() && (std::isdigit((unsigned char)s_[pos_]) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit((unsigned char)s_[p])) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      }
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(at, pos_ - at), &used);
      if (used != pos_ - at) throw std::invalid_argument("");
      return num(v);
    } catch (const std::exception&) {
      throw ParseError("malformed numeric literal", at);
    }
  }

  NodePtr identifier() {
    const std::size_t at = pos_;
    while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(at, pos_ - at);
    if (name == "pi") return mk(Kind::Pi);
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
      expect('(');
      NodePtr arg = expr();
      expect(')');
      if (name == "sin") return fun(Kind::Sin, arg);
      if (name == "cos") return fun(Kind::Cos, arg);
      if (name == "exp") return fun(Kind::Exp, arg);
      return fun(Kind::Sqrt, arg);
    }
    if (name == "x" || name == "y") {
      auto n = mk(Kind::Var);
      const_cast<Node&>(*n).name = name;
      return n;
    }
    throw ParseError("unknown identifier '" + name + "'", at);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace ast

// ---------------------------------------------------------------------------

DiffExpr parse_expr(const std::string& source) {
  if (source.empty()) throw ParseError("empty expression", 0);
  DiffExpr e;
  e.root_ = ast::Parser(source).parse();
  e.source_ = source;
  ast::collect_vars(*e.root_, e.vars_);
  return e;
}

double DiffExpr::eval_xy(double x, double y) const {
  if (!root_) throw EvalError("empty expression");
  const double v = ast::eval_node(*root_, x, y);
  if (!std::isfinite(v)) throw EvalError("non-finite value in evaluation");
  return v;
}

double DiffExpr::eval(double v) const {
  if (vars_.size() > 1)
    throw EvalError("expression has more than one free variable");
  return eval_xy(v, v);
}

DiffExpr DiffExpr::derivative(const std::string& var, int order) const {
  if (order < 0 || order > 12) throw EvalError("derivative order out of range (0..12)");
  if (!root_) throw EvalError("empty expression");
  DiffExpr out = *this;
  for (int i = 0; i < order; ++i) out.root_ = ast::diff(out.root_, var);
  out.source_ = out.serialize();
  out.vars_.clear();
  ast::collect_vars(*out.root_, out.vars_);
  return out;
}

DiffExpr DiffExpr::derivative(int order) const {
  if (vars_.empty()) return derivative("x", order);
  if (vars_.size() > 1)
    throw EvalError("expression has more than one free variable");
  return derivative(*vars_.begin(), order);
}

std::string DiffExpr::serialize() const {
  if (!root_) return "";
  std::ostringstream os;
  ast::serialize_node(*root_, os);
  return os.str();
}

bool DiffExpr::structurally_equal(const DiffExpr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return ast::equal_nodes(*root_, *other.root_);
}

}  // namespace jvf
