#include "kfib/expr.hpp"

#include <variant>

namespace kfib::num {

enum class Op { Add, Sub, Mul, Div, Neg, Log, Exp, Abs, Pow };

struct Expr::Node {
  struct Input {
    std::size_t index;
  };
  struct Constant {
    mpq_class value;
  };
  struct Apply {
    Op op;
    std::shared_ptr<const Node> lhs, rhs;
  };
  std::variant<Input, Constant, Apply> v;
};

namespace {

Ball eval_node(const Expr::Node& node, std::span<const Ball> inputs, long bits);

Ball eval_apply(const Expr::Node::Apply& a, std::span<const Ball> inputs, long bits) {
  Ball l = eval_node(*a.lhs, inputs, bits);
  switch (a.op) {
    case Op::Neg: return -l;
    case Op::Log: return log(l);
    case Op::Exp: return exp(l);
    case Op::Abs: return abs(l);
    default: break;
  }
  Ball r = eval_node(*a.rhs, inputs, bits);
  switch (a.op) {
    case Op::Add: return l + r;
    case Op::Sub: return l - r;
    case Op::Mul: return l * r;
    case Op::Div: return l / r;
    case Op::Pow: return pow(l, r);
    default: break;
  }
  throw DomainError("malformed expression");
}

Ball eval_node(const Expr::Node& node, std::span<const Ball> inputs, long bits) {
  using N = Expr::Node;
  if (const auto* in = std::get_if<N::Input>(&node.v)) {
    if (in->index >= inputs.size()) throw DomainError("expression input index out of range");
    return inputs[in->index].precision() >= bits ? inputs[in->index] : inputs[in->index].with_precision(bits);
  }
  if (const auto* c = std::get_if<N::Constant>(&node.v)) return Ball::from_rational(c->value, bits);
  return eval_apply(std::get<N::Apply>(node.v), inputs, bits);
}

}  // namespace

Expr::Expr(long value) : node_(std::make_shared<const Node>(Node{Node::Constant{mpq_class(value)}})) {}

Expr Expr::input(std::size_t index) { return Expr(std::make_shared<const Node>(Node{Node::Input{index}})); }

Expr Expr::constant(const mpq_class& value) {
  return Expr(std::make_shared<const Node>(Node{Node::Constant{value}}));
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Add, a.node_, b.node_}}));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Sub, a.node_, b.node_}}));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Mul, a.node_, b.node_}}));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Div, a.node_, b.node_}}));
}
Expr operator-(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Neg, a.node_, nullptr}}));
}
Expr log(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Log, a.node_, nullptr}}));
}
Expr exp(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Exp, a.node_, nullptr}}));
}
Expr abs(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Abs, a.node_, nullptr}}));
}
Expr pow(const Expr& base, const Expr& exponent) {
  return Expr(
      std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Apply{Op::Pow, base.node_, exponent.node_}}));
}

Ball Expr::eval(std::span<const Ball> inputs, long bits) const { return eval_node(*node_, inputs, bits); }

Ball ball_eval(const Expr& expr, std::span<const Ball> inputs, long bits) {
  for (const Ball& in : inputs)
    if (!mpfr_number_p(in.rad())) throw DomainError("ball_eval input with non-finite radius");
  return expr.eval(inputs, bits);
}

Ball ball_eval(const Expr& expr, std::span<const Ball> inputs, const PrecisionPolicy& policy) {
  return with_escalation(policy, [&](long bits) { return ball_eval(expr, inputs, bits); });
}

}  // namespace kfib::num
