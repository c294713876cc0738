#pragma once

#include "rotdisc/cf.hpp"
#include "rotdisc/numeric.hpp"
#include "rotdisc/seq_expr.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotdisc {

struct SchedulerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleSpec : SchedulerError {
  explicit InfeasibleSpec(const std::string& what) : SchedulerError(what) {}
};

struct IntRange {
  BigInt lo;
  BigInt hi;
  BigInt count() const { return hi - lo + 1; }
};

// Per-stage evidence that both ratio inequalities hold, in log form, with the
// admissible perturbation window around the chosen pair.
struct StageCertificate {
  std::string mode;  // "squeeze", "slow", "fast"
  std::size_t stage = 0;  // 0-based
  BigInt k;
  BigInt m;
  BigInt q_odd;   // q_{2i+1}
  BigInt q_even;  // q_{2i+2}
  Real64 ln_b;    // ln(1 + k_1 + ... + k_{i+1})
  Real64 ln_N;
  std::optional<Real64> ln_c, ln_d, ln_eps;
  std::optional<Real64> slack1;  // ln_b - ln_c - ln_N        (squeeze lower)
                                 // ln_c - ln_b - ln_N        (slow)
                                 // ln_b - ln_d - ln_N        (fast)
  std::optional<Real64> slack2;  // ln_d + ln_eps - ln_b      (squeeze upper)
  IntRange k_window{0, 0};
  IntRange m_window{0, 0};
};

struct BudgetExceeded : SchedulerError {
  BudgetExceeded(const std::string& what, std::optional<StageCertificate> near_miss)
      : SchedulerError(what), near_miss(std::move(near_miss)) {}
  std::optional<StageCertificate> near_miss;
};

struct SqueezeSpec {
  std::vector<ExprPtr> cs;
  std::vector<ExprPtr> ds;
  std::vector<std::string> c_sources, d_sources;
  ScheduleExpr n_schedule = ScheduleExpr::default_N();
  ScheduleExpr eps_schedule = ScheduleExpr::default_eps();
  std::size_t stages = 0;
  BigInt k_cap = parse_big_uint("1e9");
  BigInt m_cap = parse_big_uint("1e18");

  // Family order at checkpoints {1e3, 1e6, 1e12}, per-expression monotonicity,
  // schedule shape.  Throws InfeasibleSpec / ScheduleViolation.
  void validate() const;
};

// Alternating digit prefix under construction plus its convergent cache.
class ConstructionState {
 public:
  ConstructionState() = default;

  std::size_t stage() const { return stage_; }
  const BigInt& k_sum() const { return k_sum_; }
  const std::vector<BigInt>& digit_list() const { return digits_; }
  DigitSequence digits() const {
    return DigitSequence(digits_, StructureTag::Alternating);
  }
  // q_{2i} and q_{2i-1} (seeds 1 and 0 at stage 0)
  const BigInt& q_even() const { return q_even_; }
  const BigInt& q_odd() const { return q_odd_; }

  void append_pair(const BigInt& k, const BigInt& m);

 private:
  std::vector<BigInt> digits_;
  BigInt k_sum_ = 0;
  BigInt q_even_ = 1;  // q_0
  BigInt q_odd_ = 0;   // q_{-1}
  std::size_t stage_ = 0;
};

struct ChosenPair {
  BigInt k;
  BigInt m;
  StageCertificate certificate;
};

// Greedy digit choice for one squeeze stage: smallest k, then the smallest m
// whose q_{2i+2} pushes d above (1+K+k)/eps_i, accepted when c stays below
// (1+K+k)/N_i.  Slacks must clear a 1e-20 log-domain margin.
ChosenPair choose_next_pair(const ConstructionState& state, const SqueezeSpec& spec);

std::pair<IntRange, IntRange> robustness_window(const ConstructionState& state,
                                                const SqueezeSpec& spec,
                                                const BigInt& k, const BigInt& m);

struct BuildResult {
  DigitSequence digits;
  std::vector<StageCertificate> certificates;
  std::uint64_t verified_to = 0;  // orbit-verified horizon (x = 0)
  std::uint64_t onset_n0 = 0;
  bool onset_found = false;
  bool horizon_warning = false;  // fewer than 2 full stages orbit-verified
};

BuildResult build_alpha(const SqueezeSpec& spec,
                        std::uint64_t verify_horizon = 1'000'000);

BuildResult build_alpha_slow(const std::vector<ExprPtr>& cs, std::size_t stages,
                             const BigInt& m_cap = parse_big_uint("1e18"),
                             const ScheduleExpr& n_schedule = ScheduleExpr::default_N());

BuildResult build_alpha_fast(const std::vector<ExprPtr>& ds, std::size_t stages,
                             const BigInt& k_cap = parse_big_uint("1e9"),
                             const ScheduleExpr& n_schedule = ScheduleExpr::default_N());

}  // namespace rotdisc
