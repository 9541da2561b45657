#pragma once

#include <gmpxx.h>

#include <memory>
#include <span>

#include "kfib/ball.hpp"

namespace kfib::num {

/* Immutable arithmetic expression over indexed Ball inputs and exact
 * rational constants, evaluated with ball_eval. */
class Expr {
 public:
  Expr(long value);  // NOLINT(google-explicit-constructor)
  static Expr input(std::size_t index);
  static Expr constant(const mpq_class& value);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr abs(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

  Ball eval(std::span<const Ball> inputs, long bits) const;

  struct Node;  // defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Ball ball_eval(const Expr& expr, std::span<const Ball> inputs, long bits);
/* Re-evaluates at escalating precision until every log/division argument is
 * certified away from zero; PrecisionExhausted past policy.max_bits. */
Ball ball_eval(const Expr& expr, std::span<const Ball> inputs, const PrecisionPolicy& policy);

}  // namespace kfib::num
