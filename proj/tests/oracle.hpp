#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths: exact bottom-up rational evaluation, exact dual-endpoint
// orbit classification, 200-digit value-domain expression evaluation, and
// exhaustive admissible-pair search.

#include "rotdisc/cf.hpp"
#include "rotdisc/orbit.hpp"
#include "rotdisc/seq_expr.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <optional>
#include <vector>

namespace oracle {

using rotdisc::BigInt;
using rotdisc::BigRat;
using Real200 =
    boost::multiprecision::number<boost::multiprecision::cpp_dec_float<200>>;

// Exact value of the nested fraction 1/(n_1 + 1/(n_2 + ...)), folded from the
// bottom.
inline BigRat nested_fraction_value(const std::vector<BigInt>& digits) {
  BigRat value = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    value = BigRat(1) / (BigRat(*it) + value);
  }
  return value;
}

inline BigRat frac(const BigRat& z) {
  BigInt fl = numerator(z) / denominator(z);  // nonnegative inputs only
  return z - BigRat(fl);
}

// Classifies {x + n*alpha} against [0,1/2] for every completion of the digit
// prefix at once, via exact rational arithmetic at both ends of the
// completion range.  nullopt = the completions disagree.
inline std::optional<rotdisc::Classification> classify_exact(
    const BigRat& x, std::uint64_t n, const rotdisc::DigitSequence& digits) {
  using rotdisc::Classification;
  const BigRat half(1, 2);
  if (n == 0) {
    return frac(x) <= half ? Classification::Lower : Classification::Upper;
  }
  auto [a, b] = rotdisc::completion_range(digits);
  BigRat za = x + BigInt(n) * a;
  BigRat zb = x + BigInt(n) * b;
  BigInt fla = numerator(za) / denominator(za);
  BigInt flb = numerator(zb) / denominator(zb);
  if (fla != flb) return std::nullopt;
  BigRat fa = za - BigRat(fla);
  BigRat fb = zb - BigRat(flb);
  if (fb <= half) return Classification::Lower;
  if (fa >= half) return Classification::Upper;
  return std::nullopt;
}

struct ExactSeries {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

// Brute-force discrepancy series from classify_exact; throws if any point is
// ambiguous at this prefix depth.
inline ExactSeries series_exact(const BigRat& x, const rotdisc::DigitSequence& digits,
                                std::uint64_t N) {
  ExactSeries out;
  out.a.assign(N + 1, 0);
  out.b.assign(N + 1, 0);
  for (std::uint64_t n = 0; n < N; ++n) {
    auto cls = classify_exact(x, n, digits);
    if (!cls) throw std::runtime_error("oracle: ambiguous point");
    out.a[n + 1] = out.a[n] + (*cls == rotdisc::Classification::Lower ? 1 : -1);
    std::int64_t mag = out.a[n + 1] < 0 ? -out.a[n + 1] : out.a[n + 1];
    out.b[n + 1] = std::max(out.b[n], mag);
  }
  return out;
}

// Direct value-domain evaluation at 200 decimal digits; the reference for the
// library's log-domain evaluator.
inline Real200 eval_value_200(const rotdisc::ExprPtr& e, const Real200& n) {
  using K = rotdisc::Expr::Kind;
  switch (e->kind) {
    case K::Var:
      return n;
    case K::Const:
      return Real200(e->lexeme);
    case K::Add:
      return eval_value_200(e->lhs, n) + eval_value_200(e->rhs, n);
    case K::Mul:
      return eval_value_200(e->lhs, n) * eval_value_200(e->rhs, n);
    case K::Div:
      return eval_value_200(e->lhs, n) / eval_value_200(e->rhs, n);
    case K::Pow:
      return pow(eval_value_200(e->lhs, n), eval_value_200(e->rhs, n));
    case K::Log:
      return log(eval_value_200(e->lhs, n));
  }
  throw std::runtime_error("oracle: corrupt expression");
}

inline Real200 eval_ln_200(const rotdisc::ExprPtr& e, const BigInt& n) {
  return log(eval_value_200(e, Real200(n)));
}

// Value-domain admissibility for one squeeze stage: checkpoint value
// S = 1 + K + k must beat c(q_even) by factor N and stay below d(q_even) by
// factor eps.
struct StageOracle {
  BigInt q_even_prev;  // q_{2i}
  BigInt q_odd_prev;   // q_{2i-1}
  BigInt k_sum;
  rotdisc::ExprPtr c, d;
  Real200 N, eps;

  BigInt q_odd(const BigInt& k) const { return 2 * k * q_even_prev + q_odd_prev; }
  BigInt q_even(const BigInt& k, const BigInt& m) const {
    return m * q_odd(k) + q_even_prev;
  }
  bool admissible(const BigInt& k, const BigInt& m) const {
    Real200 S(1 + k_sum + k);
    BigInt q2 = q_even(k, m);
    if (!(S > eval_value_200(c, Real200(q2)) * N)) return false;
    return S < eval_value_200(d, Real200(q2)) * eps;
  }
};

}  // namespace oracle
