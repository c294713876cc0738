#pragma once

#include "rotdisc/numeric.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotdisc {

struct ExprError : std::runtime_error {
  ExprError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset(offset) {}
  std::size_t offset;
};
struct SyntaxError : ExprError {
  using ExprError::ExprError;
};
struct NegativeOrZeroConstant : ExprError {
  explicit NegativeOrZeroConstant(std::size_t offset)
      : ExprError("constant must be > 0", offset) {}
};
struct NonConstantExponent : ExprError {
  explicit NonConstantExponent(std::size_t offset)
      : ExprError("exponent must be a constant", offset) {}
};
struct EvalDomainError : std::runtime_error {
  explicit EvalDomainError(const std::string& what) : std::runtime_error(what) {}
};
struct ScheduleViolation : std::runtime_error {
  explicit ScheduleViolation(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyFamily : std::runtime_error {
  EmptyFamily() : std::runtime_error("sequence family is empty") {}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// AST over: variable, positive decimal constants, + * /, ^ (constant
// exponent), natural log, grouping.  Subtraction is absent so every value is
// positive by construction.
struct Expr {
  enum class Kind { Var, Const, Add, Mul, Div, Pow, Log };
  Kind kind;
  std::string lexeme;  // Const: source text, kept for printing
  Real64 value;        // Const only
  ExprPtr lhs, rhs;    // Pow: lhs ^ rhs
};

// Grammar (precedence low to high):
//   sum  := prod (('+') prod)*
//   prod := pow (('*'|'/') pow)*
//   pow  := atom ('^' exponent)?
//   atom := var | constant | 'log' '(' sum ')' | '(' sum ')'
// Sequence expressions use variable 'n' and require constant exponents;
// schedule expressions (variable 'i') may use full expressions as exponents.
ExprPtr parse_expr(std::string_view text, char var = 'n',
                   bool allow_expr_exponent = false);

std::string pretty(const ExprPtr& e, char var = 'n');

bool is_constant(const ExprPtr& e);

// ln(expr(n)), evaluated entirely in the log domain ('+' via log-sum-exp) so
// arguments with thousands of digits stay cheap.
Real64 eval_log(const ExprPtr& e, const BigInt& n);

// Direct value evaluation; used for exponents and schedule values, whose
// magnitudes stay within floating range.
Real64 eval_value(const ExprPtr& e, const BigInt& n);

// True if expr is nondecreasing on a doubling ladder n = 1, 2, 4, ..., 2^64.
bool check_monotone_nondecreasing(const ExprPtr& e);

enum class ScheduleKind { Divergent, Vanishing };  // N_i vs eps_i

struct ScheduleExpr {
  ExprPtr expr;
  std::string source;

  static ScheduleExpr parse(const std::string& text);
  static ScheduleExpr default_N();    // i+1
  static ScheduleExpr default_eps();  // 1/2^(i+1)

  Real64 log_at(std::size_t i) const;
  Real64 value_at(std::size_t i) const;

  // Samples i = 0..stages; Divergent must be nondecreasing and >= 1,
  // Vanishing positive nonincreasing.
  void validate(ScheduleKind kind, std::size_t stages) const;
};

struct FamilyOrderReport {
  bool pass = true;
  std::vector<std::string> violations;
};

// At every checkpoint: ln c1 < ln c2 < ... < ln d2 < ln d1 < ln n, and each
// adjacent log-gap widens across checkpoints (finite proxy for ratio -> 0).
FamilyOrderReport validate_family_order(const std::vector<ExprPtr>& cs,
                                        const std::vector<ExprPtr>& ds,
                                        const std::vector<BigInt>& checkpoints);

}  // namespace rotdisc
