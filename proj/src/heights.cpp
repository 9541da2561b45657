#include "kfib/heights.hpp"

#include "kfib/sequence.hpp"

namespace kfib {

using num::Ball;

HeightConstants log_height_constants(const KFibContext& ctx, long m) {
  if (m < 3) throw DomainError("log_height_constants needs m >= 3");
  const long bits = ctx.alpha.precision();
  return {ctx.log_alpha / ctx.k, 3 * log(Ball::exact(ctx.k, bits)),
          log(Ball::from_integer(kfib_at(ctx.k, m + 1), bits))};
}

namespace {

Ball poly_eval(const std::vector<mpz_class>& c, const Ball& x) {
  Ball acc = Ball::from_integer(c[0], x.precision());
  for (std::size_t i = 1; i < c.size(); ++i) acc = acc * x + Ball::from_integer(c[i], x.precision());
  return acc;
}

int sign_at(const std::vector<mpz_class>& c, const mpq_class& x) {
  mpq_class acc = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) acc = acc * x + c[i];
  return sgn(acc);
}

/* log max(1, r) for r >= 0, enclosing both branches when r straddles 1. */
Ball log_max_one(const Ball& r) {
  const long bits = r.precision();
  mpq_class hi = r.upper_q();
  if (hi <= 1) return Ball::exact(0, bits);
  mpq_class lo = r.lower_q();
  if (lo > 1) return log(r);
  Ball top = log(Ball::from_rational(hi, bits));
  return Ball::from_endpoints(0, top.upper_q(), bits);
}

/* Contribution of the two roots of A x^2 + B x + C (balls, A != 0). */
Ball quadratic_contribution(const Ball& a, const Ball& b, const Ball& c) {
  Ball disc = b * b - 4 * a * c;
  if (disc.certainly_negative()) {
    // complex pair, |z|^2 = C / A
    return 2 * log_max_one(sqrt(abs(c / a)));
  }
  if (!disc.certainly_positive()) throw PrecisionExhausted("discriminant sign undecided");
  Ball s = sqrt(disc);
  Ball r1 = abs((-b + s) / (2 * a));
  Ball r2 = abs((-b - s) / (2 * a));
  return log_max_one(r1) + log_max_one(r2);
}

}  // namespace

Ball log_height_from_minpoly(std::vector<mpz_class> c, long bits) {
  while (!c.empty() && c.front() == 0) c.erase(c.begin());
  if (c.size() < 2 || c.size() > 4) throw DomainError("height routine supports degree 1..3");
  if (c.front() < 0)
    for (auto& v : c) v = -v;
  const long degree = static_cast<long>(c.size()) - 1;
  Ball lead = Ball::from_integer(c[0], bits);
  Ball sum = log(lead);

  if (degree == 1) {
    mpq_class root(-c[1], c[0]);
    root.canonicalize();
    sum = sum + log_max_one(abs(Ball::from_rational(root, bits)));
  } else if (degree == 2) {
    sum = sum + quadratic_contribution(lead, Ball::from_integer(c[1], bits), Ball::from_integer(c[2], bits));
  } else {
    // one real root by certified bisection inside the Cauchy bound, then deflate
    mpz_class bound = 0;
    for (std::size_t i = 1; i < c.size(); ++i) bound = std::max(bound, mpz_class(abs(c[i])));
    mpq_class lo = -(mpq_class(bound, c[0]) + 1), hi = mpq_class(bound, c[0]) + 1;
    int s_lo = sign_at(c, lo);
    mpq_class eps(1);
    mpq_div_2exp(eps.get_mpq_t(), eps.get_mpq_t(), static_cast<mp_bitcnt_t>(bits + 8));
    while (hi - lo > eps) {
      mpq_class mid = (lo + hi) / 2;
      int s = sign_at(c, mid);
      if (s == 0) {
        lo = hi = mid;
        break;
      }
      (s == s_lo ? lo : hi) = mid;
    }
    Ball r = Ball::from_endpoints(lo, hi, bits);
    Ball b2 = Ball::from_integer(c[1], bits) + lead * r;
    Ball c2 = Ball::from_integer(c[2], bits) + b2 * r;
    sum = sum + log_max_one(abs(r)) + quadratic_contribution(lead, b2, c2);
    (void)poly_eval;
  }
  return sum / degree;
}

Ball matveev_exponent(const LinearFormInstance& inst) {
  const std::size_t t = inst.heights.size();
  if (t < 2 || t > 3 || inst.coefficients.size() != t)
    throw InvalidInstance("Matveev instance needs 2 or 3 matching terms");
  if (inst.degree < 1) throw InvalidInstance("field degree must be positive");
  const long bits = inst.B.precision();
  const Ball floor_a = Ball::from_decimal("0.16", bits);
  // a ball touching the threshold is accepted and hulled with it; E only grows with A_i and B
  for (const Ball& a : inst.heights)
    if (a.upper_q() < floor_a.lower_q()) throw InvalidInstance("Matveev height A_i below 0.16");
  mpz_class max_b = 0;
  for (const auto& b : inst.coefficients) max_b = std::max(max_b, mpz_class(abs(b)));
  const Ball b_floor = Ball::from_integer(max_b, bits);
  if (inst.B.upper_q() < b_floor.lower_q()) throw InvalidInstance("B < max |b_i|");
  const Ball B = max(inst.B, b_floor);

  const long tl = static_cast<long>(t);
  const Ball d = Ball::exact(inst.degree, bits);
  Ball e = Ball::from_decimal("1.4", bits) * pow(Ball::exact(30, bits), tl + 3) * pow(Ball::exact(tl, bits), 4) *
           sqrt(Ball::exact(tl, bits)) * d * d * (1 + log(d)) * (1 + log(B));
  for (const Ball& a : inst.heights) e = e * max(a, floor_a);
  return e;
}

LmnBound lmn_exponent(int degree, const Ball& log_b1, const Ball& log_b2, const Ball& b_prime) {
  if (degree < 1) throw InvalidInstance("field degree must be positive");
  if (!log_b1.certainly_positive() || !log_b2.certainly_positive())
    throw InvalidInstance("log B_i must be positive");
  if (!b_prime.certainly_positive()) throw InvalidInstance("b' must be positive");
  const long bits = std::max(log_b1.precision(), b_prime.precision());
  Ball first = log(b_prime) + Ball::from_decimal("0.14", bits);
  Ball second = Ball::from_rational(mpq_class(21, degree), bits);
  Ball third = Ball::from_rational(mpq_class(1, 2), bits);
  Ball h = max(max(first, second), third);

  LmnBranch branch = LmnBranch::Undecided;
  auto beats = [](const Ball& a, const Ball& b, const Ball& c) {
    return a.lower_q() > b.upper_q() && a.lower_q() > c.upper_q();
  };
  if (beats(first, second, third))
    branch = LmnBranch::LogBPrime;
  else if (beats(second, first, third))
    branch = LmnBranch::TwentyOneOverD;
  else if (beats(third, first, second))
    branch = LmnBranch::Half;

  const Ball d = Ball::exact(degree, bits);
  return {Ball::from_decimal("24.34", bits) * pow(d, 4) * h * h * log_b1 * log_b2, branch};
}

Ball sl_absorb(int r, const Ball& T) {
  if (r < 1) throw InvalidInstance("Sanchez-Luca absorption needs r >= 1");
  const long bits = T.precision();
  Ball floor_t = pow(Ball::exact(4L * r * r, bits), r);
  if (!(floor_t.upper_q() < T.lower_q())) throw InvalidInstance("Sanchez-Luca absorption needs T > (4r^2)^r");
  return pow(Ball::exact(2, bits), r) * T * pow(log(T), r);
}

}  // namespace kfib
