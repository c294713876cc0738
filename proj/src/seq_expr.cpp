#include "rotdisc/seq_expr.hpp"

#include <cctype>

namespace rotdisc {

namespace {

ExprPtr make(Expr::Kind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

class Parser {
 public:
  Parser(std::string_view text, char var, bool allow_expr_exponent)
      : text_(text), var_(var), expr_exponent_(allow_expr_exponent) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("empty expression", 0);
    ExprPtr e = sum();
    skip_ws();
    if (pos_ < text_.size()) {
      throw SyntaxError(std::string("unexpected character '") + text_[pos_] + "'",
                        pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr sum() {
    ExprPtr e = prod();
    while (true) {
      if (eat('+')) {
        e = make(Expr::Kind::Add, e, prod());
      } else {
        return e;
      }
    }
  }

  ExprPtr prod() {
    ExprPtr e = pow();
    while (true) {
      if (eat('*')) {
        e = make(Expr::Kind::Mul, e, pow());
      } else if (eat('/')) {
        e = make(Expr::Kind::Div, e, pow());
      } else {
        return e;
      }
    }
  }

  ExprPtr pow() {
    ExprPtr base = atom();
    if (eat('^')) {
      std::size_t at = pos_;
      ExprPtr exponent = atom();
      if (!is_constant(exponent) && !expr_exponent_) {
        throw NonConstantExponent(at);
      }
      return make(Expr::Kind::Pow, base, exponent);
    }
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("expected operand", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = sum();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (c == var_) {
      ++pos_;
      return make(Expr::Kind::Var);
    }
    if (text_.substr(pos_).starts_with("log")) {
      pos_ += 3;
      if (!eat('(')) throw SyntaxError("expected '(' after log", pos_);
      ExprPtr e = sum();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return make(Expr::Kind::Log, e);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return constant();
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr constant() {
    std::size_t start = pos_;
    bool dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.' && !dot) {
        dot = true;
        ++pos_;
      } else {
        break;
      }
    }
    std::string lex(text_.substr(start, pos_ - start));
    if (lex == ".") throw SyntaxError("malformed number", start);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Const;
    e->lexeme = lex;
    e->value = Real64(lex);
    if (e->value <= 0) throw NegativeOrZeroConstant(start);
    return e;
  }

  std::string_view text_;
  char var_;
  bool expr_exponent_;
  std::size_t pos_ = 0;
};

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print(const ExprPtr& e, char var, int parent_prec, std::string& out) {
  const int prec = precedence(e->kind);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e->kind) {
    case Expr::Kind::Var:
      out += var;
      break;
    case Expr::Kind::Const:
      out += e->lexeme;
      break;
    case Expr::Kind::Add:
      print(e->lhs, var, prec, out);
      out += " + ";
      print(e->rhs, var, prec, out);
      break;
    case Expr::Kind::Mul:
      print(e->lhs, var, prec, out);
      out += " * ";
      print(e->rhs, var, prec, out);
      break;
    case Expr::Kind::Div:
      print(e->lhs, var, prec, out);
      out += " / ";
      // right operand of '/' needs parens at equal precedence
      print(e->rhs, var, prec + 1, out);
      break;
    case Expr::Kind::Pow:
      print(e->lhs, var, prec + 1, out);
      out += '^';
      print(e->rhs, var, prec + 1, out);
      break;
    case Expr::Kind::Log:
      out += "log(";
      print(e->lhs, var, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

const Real64& log_sum_threshold() {
  static const Real64 t("200");
  return t;
}

Real64 log_sum_exp(const Real64& a, const Real64& b) {
  const Real64& hi = a >= b ? a : b;
  const Real64& lo = a >= b ? b : a;
  if (hi - lo > log_sum_threshold()) return hi;
  return hi + log(Real64(1) + exp(lo - hi));
}

}  // namespace

ExprPtr parse_expr(std::string_view text, char var, bool allow_expr_exponent) {
  return Parser(text, var, allow_expr_exponent).run();
}

std::string pretty(const ExprPtr& e, char var) {
  std::string out;
  print(e, var, 0, out);
  return out;
}

bool is_constant(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return false;
    case Expr::Kind::Const:
      return true;
    case Expr::Kind::Log:
      return is_constant(e->lhs);
    default:
      return is_constant(e->lhs) && is_constant(e->rhs);
  }
}

Real64 eval_log(const ExprPtr& e, const BigInt& n) {
  switch (e->kind) {
    case Expr::Kind::Var:
      if (n < 1) throw EvalDomainError("sequence argument must be >= 1");
      return log(Real64(n));
    case Expr::Kind::Const:
      return log(e->value);
    case Expr::Kind::Add:
      return log_sum_exp(eval_log(e->lhs, n), eval_log(e->rhs, n));
    case Expr::Kind::Mul:
      return eval_log(e->lhs, n) + eval_log(e->rhs, n);
    case Expr::Kind::Div:
      return eval_log(e->lhs, n) - eval_log(e->rhs, n);
    case Expr::Kind::Pow:
      return eval_value(e->rhs, n) * eval_log(e->lhs, n);
    case Expr::Kind::Log: {
      Real64 inner = eval_log(e->lhs, n);
      if (inner <= 0) {
        throw EvalDomainError("log argument is <= 1; ln of its log undefined");
      }
      return log(inner);
    }
  }
  throw EvalDomainError("corrupt expression node");
}

Real64 eval_value(const ExprPtr& e, const BigInt& n) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return Real64(n);
    case Expr::Kind::Const:
      return e->value;
    case Expr::Kind::Add:
      return eval_value(e->lhs, n) + eval_value(e->rhs, n);
    case Expr::Kind::Mul:
      return eval_value(e->lhs, n) * eval_value(e->rhs, n);
    case Expr::Kind::Div:
      return eval_value(e->lhs, n) / eval_value(e->rhs, n);
    case Expr::Kind::Pow:
      return pow(eval_value(e->lhs, n), eval_value(e->rhs, n));
    case Expr::Kind::Log: {
      Real64 inner = eval_value(e->lhs, n);
      if (inner <= 0) throw EvalDomainError("log of a nonpositive value");
      return log(inner);
    }
  }
  throw EvalDomainError("corrupt expression node");
}

bool check_monotone_nondecreasing(const ExprPtr& e) {
  BigInt n = 1;
  Real64 prev = eval_log(e, n);
  for (int step = 0; step < 64; ++step) {
    n *= 2;
    Real64 cur = eval_log(e, n);
    if (cur < prev) return false;
    prev = cur;
  }
  return true;
}

ScheduleExpr ScheduleExpr::parse(const std::string& text) {
  ScheduleExpr s;
  s.expr = parse_expr(text, 'i', /*allow_expr_exponent=*/true);
  s.source = text;
  return s;
}

ScheduleExpr ScheduleExpr::default_N() { return parse("i+1"); }

ScheduleExpr ScheduleExpr::default_eps() { return parse("1/2^(i+1)"); }

Real64 ScheduleExpr::log_at(std::size_t i) const {
  // i = 0 is a legal stage index but not a legal sequence argument; shift the
  // evaluation through value space, which handles i = 0 directly.
  return log(value_at(i));
}

Real64 ScheduleExpr::value_at(std::size_t i) const {
  return eval_value(expr, BigInt(i));
}

void ScheduleExpr::validate(ScheduleKind kind, std::size_t stages) const {
  Real64 prev = value_at(0);
  if (prev <= 0) throw ScheduleViolation("schedule not positive at i=0: " + source);
  for (std::size_t i = 1; i <= stages; ++i) {
    Real64 cur = value_at(i);
    if (cur <= 0) {
      throw ScheduleViolation("schedule not positive at i=" + std::to_string(i) +
                              ": " + source);
    }
    if (kind == ScheduleKind::Divergent && cur < prev) {
      throw ScheduleViolation("N schedule must be nondecreasing: " + source);
    }
    if (kind == ScheduleKind::Vanishing && cur > prev) {
      throw ScheduleViolation("eps schedule must be nonincreasing: " + source);
    }
    prev = cur;
  }
}

FamilyOrderReport validate_family_order(const std::vector<ExprPtr>& cs,
                                        const std::vector<ExprPtr>& ds,
                                        const std::vector<BigInt>& checkpoints) {
  if (cs.empty() || ds.empty()) throw EmptyFamily();
  FamilyOrderReport rep;

  // chain: c1, c2, ..., cM, dM', ..., d2, d1, n
  std::vector<ExprPtr> chain = cs;
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) chain.push_back(*it);
  ExprPtr var = make(Expr::Kind::Var);
  chain.push_back(var);

  std::vector<std::vector<Real64>> lns(checkpoints.size());
  for (std::size_t t = 0; t < checkpoints.size(); ++t) {
    for (const auto& e : chain) lns[t].push_back(eval_log(e, checkpoints[t]));
  }
  for (std::size_t t = 0; t < checkpoints.size(); ++t) {
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      if (!(lns[t][j] < lns[t][j + 1])) {
        rep.pass = false;
        rep.violations.push_back("ordering violated at checkpoint " +
                                 checkpoints[t].str() + " (chain position " +
                                 std::to_string(j) + ")");
      }
    }
  }
  // ratio -> 0 proxy: the log gap of each adjacent pair must widen
  for (std::size_t t = 0; t + 1 < checkpoints.size(); ++t) {
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      Real64 gap_now = lns[t][j + 1] - lns[t][j];
      Real64 gap_next = lns[t + 1][j + 1] - lns[t + 1][j];
      if (!(gap_next > gap_now)) {
        rep.pass = false;
        rep.violations.push_back("log gap not widening between checkpoints " +
                                 checkpoints[t].str() + " and " +
                                 checkpoints[t + 1].str() + " (chain position " +
                                 std::to_string(j) + ")");
      }
    }
  }
  return rep;
}

}  // namespace rotdisc
