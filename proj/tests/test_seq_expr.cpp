#include "rotdisc/seq_expr.hpp"

#include "oracle.hpp"

#include <doctest.h>

using namespace rotdisc;

namespace {

bool same_tree(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var:
      return true;
    case Expr::Kind::Const:
      return a->value == b->value;
    case Expr::Kind::Log:
      return same_tree(a->lhs, b->lhs);
    default:
      return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
  }
}

const Real64& tol30() {
  static const Real64 t("1e-30");
  return t;
}

}  // namespace

TEST_CASE("parse: grammar shapes") {
  auto e = parse_expr("n^0.5");
  CHECK(e->kind == Expr::Kind::Pow);
  CHECK(e->lhs->kind == Expr::Kind::Var);
  CHECK(e->rhs->kind == Expr::Kind::Const);
  CHECK(e->rhs->value == Real64("0.5"));

  auto f = parse_expr("log(n+1)^2 * 3");
  CHECK(f->kind == Expr::Kind::Mul);
  CHECK(f->lhs->kind == Expr::Kind::Pow);
  CHECK(f->lhs->lhs->kind == Expr::Kind::Log);
  CHECK(f->lhs->lhs->lhs->kind == Expr::Kind::Add);
  CHECK(f->rhs->kind == Expr::Kind::Const);
}

TEST_CASE("parse: errors carry byte offsets") {
  CHECK_THROWS_AS(parse_expr("n-5"), SyntaxError);
  try {
    parse_expr("n-5");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 1);
  }
  CHECK_THROWS_AS(parse_expr(""), SyntaxError);
  CHECK_THROWS_AS(parse_expr("n^0"), NegativeOrZeroConstant);
  CHECK_THROWS_AS(parse_expr("n^n"), NonConstantExponent);
  CHECK_THROWS_AS(parse_expr("2^(n+1)"), NonConstantExponent);
  CHECK_THROWS_AS(parse_expr("log n"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(n"), SyntaxError);
  // schedule mode admits expression exponents
  CHECK_NOTHROW(parse_expr("1/2^(i+1)", 'i', true));
}

TEST_CASE("eval_log: analytic spot checks") {
  const BigInt ten_k = 10000;
  Real64 got = eval_log(parse_expr("n^0.25"), ten_k);
  Real64 want = log(Real64(10));  // 0.25 * ln(10^4)
  CHECK(abs(got - want) < tol30());

  CHECK(abs(eval_log(parse_expr("n"), BigInt(10)) - log(Real64(10))) < tol30());

  // additions go through log-sum-exp
  Real64 sum = eval_log(parse_expr("n+n"), BigInt(7));
  CHECK(abs(sum - log(Real64(14))) < tol30());
}

TEST_CASE("eval_log: huge argument against the 200-digit reference") {
  const BigInt huge = pow(BigInt(10), 500);
  auto e = parse_expr("log(n)");
  Real64 got = eval_log(e, huge);
  // ln(500 ln 10), frozen from the reference evaluator
  Real64 want("7.048640543670147542439955290452455150235");
  CHECK(abs(got - want) < Real64("1e-30"));
  oracle::Real200 ref = oracle::eval_ln_200(e, huge);
  CHECK(abs(oracle::Real200(got.str(64)) - ref) < oracle::Real200("1e-20"));
}

TEST_CASE("eval_log agrees with the reference across a corpus") {
  const std::vector<std::string> corpus = {
      "n^0.5",       "n^0.2 * 3",          "n / log(n+2)", "log(n+1)^2",
      "n^0.75 + n^0.25", "2.5 * n^0.125 / log(n+3)", "n + 1000000",
      "log(log(n+10)+1) + n^0.001"};
  const std::vector<BigInt> args = {BigInt(1), BigInt(10), pow(BigInt(10), 6),
                                    pow(BigInt(10), 50), pow(BigInt(10), 1000)};
  for (const auto& text : corpus) {
    auto e = parse_expr(text);
    for (const auto& n : args) {
      oracle::Real200 ref = oracle::eval_ln_200(e, n);
      Real64 got = eval_log(e, n);
      CHECK(abs(oracle::Real200(got.str(64)) - ref) < oracle::Real200("1e-20"));
    }
  }
}

TEST_CASE("pretty-print round trip") {
  const std::vector<std::string> corpus = {
      "n^0.5",
      "log(n+1)^2 * 3",
      "n / (n + 1)",
      "(n + 2) * (n + 3)",
      "n / (n / (n + 1))",
      "log(log(n+2)) + n^0.25 / 7",
      "1.25 * n^3 + n * n / log(n+2)"};
  for (const auto& text : corpus) {
    auto once = parse_expr(text);
    auto twice = parse_expr(pretty(once));
    CHECK(same_tree(once, twice));
  }
}

TEST_CASE("monotonicity screen") {
  CHECK(check_monotone_nondecreasing(parse_expr("n")));
  CHECK(check_monotone_nondecreasing(parse_expr("log(n+1)")));
  CHECK(check_monotone_nondecreasing(parse_expr("n^0.25")));
  CHECK_FALSE(check_monotone_nondecreasing(parse_expr("5/n")));
  CHECK_FALSE(check_monotone_nondecreasing(parse_expr("n^0.5/n")));
}

TEST_CASE("validate_family_order") {
  auto cks = [](std::vector<long long> v) {
    return std::vector<BigInt>(v.begin(), v.end());
  };
  auto rep1 = validate_family_order({parse_expr("n^0.2")}, {parse_expr("n^0.8")},
                                    cks({100, 10000, 100000000}));
  CHECK(rep1.pass);

  auto rep2 = validate_family_order({parse_expr("n^0.6")}, {parse_expr("n^0.4")},
                                    cks({100, 10000, 100000000}));
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.violations.size() >= 3);

  auto rep3 = validate_family_order(
      {parse_expr("n^0.2"), parse_expr("n^0.3")},
      {parse_expr("n^0.7"), parse_expr("n^0.6")}, cks({1000, 1000000}));
  CHECK(rep3.pass);

  CHECK_THROWS_AS(validate_family_order({}, {parse_expr("n^0.5")}, cks({10})),
                  EmptyFamily);
}

TEST_CASE("schedules: defaults and validation") {
  auto N = ScheduleExpr::default_N();
  auto eps = ScheduleExpr::default_eps();
  CHECK(N.value_at(0) == 1);
  CHECK(N.value_at(5) == 6);
  CHECK(eps.value_at(0) == Real64("0.5"));
  CHECK(abs(eps.value_at(9) - Real64(1) / 1024) < tol30());
  CHECK_NOTHROW(N.validate(ScheduleKind::Divergent, 50));
  CHECK_NOTHROW(eps.validate(ScheduleKind::Vanishing, 50));
  CHECK_THROWS_AS(ScheduleExpr::parse("1/2^(i+1)").validate(ScheduleKind::Divergent, 8),
                  ScheduleViolation);
  CHECK_THROWS_AS(ScheduleExpr::parse("i+1").validate(ScheduleKind::Vanishing, 8),
                  ScheduleViolation);
}
