#include "rotdisc/scheduler.hpp"

#include "rotdisc/orbit.hpp"

#include <algorithm>

namespace rotdisc {

namespace {

const Real64& slack_margin() {
  static const Real64 m("1e-20");
  return m;
}

std::vector<BigInt> order_checkpoints() {
  return {parse_big_uint("1e3"), parse_big_uint("1e6"), parse_big_uint("1e12")};
}

ExprPtr family_at(const std::vector<ExprPtr>& family, std::size_t stage) {
  // stages beyond the family length reuse the last member
  return family[std::min(stage, family.size() - 1)];
}

// One stage of the alternating recurrence: q_{2i+1} = 2k q_{2i} + q_{2i-1},
// q_{2i+2} = m q_{2i+1} + q_{2i}.
struct StageCtx {
  BigInt q_e;  // q_{2i}
  BigInt q_o;  // q_{2i-1}
  BigInt k_sum;
  std::size_t stage = 0;

  explicit StageCtx(const ConstructionState& st)
      : q_e(st.q_even()), q_o(st.q_odd()), k_sum(st.k_sum()), stage(st.stage()) {}

  BigInt q_next_odd(const BigInt& k) const { return 2 * k * q_e + q_o; }
  BigInt q_next_even(const BigInt& k, const BigInt& m) const {
    return m * q_next_odd(k) + q_e;
  }
  BigInt checkpoint_b(const BigInt& k) const { return 1 + k_sum + k; }
};

struct SqueezeEval {
  ExprPtr c, d;
  Real64 ln_N, ln_eps;

  SqueezeEval(const SqueezeSpec& spec, std::size_t stage)
      : c(family_at(spec.cs, stage)),
        d(family_at(spec.ds, stage)),
        ln_N(spec.n_schedule.log_at(stage)),
        ln_eps(spec.eps_schedule.log_at(stage)) {}

  StageCertificate certify(const StageCtx& ctx, const BigInt& k,
                           const BigInt& m) const {
    StageCertificate cert;
    cert.mode = "squeeze";
    cert.stage = ctx.stage;
    cert.k = k;
    cert.m = m;
    cert.q_odd = ctx.q_next_odd(k);
    cert.q_even = ctx.q_next_even(k, m);
    cert.ln_b = log(Real64(ctx.checkpoint_b(k)));
    cert.ln_N = ln_N;
    cert.ln_eps = ln_eps;
    cert.ln_c = eval_log(c, cert.q_even);
    cert.ln_d = eval_log(d, cert.q_even);
    cert.slack1 = cert.ln_b - *cert.ln_c - ln_N;
    cert.slack2 = *cert.ln_d + ln_eps - cert.ln_b;
    cert.k_window = IntRange{k, k};
    cert.m_window = IntRange{m, m};
    return cert;
  }

  bool admissible(const StageCtx& ctx, const BigInt& k, const BigInt& m) const {
    const Real64 ln_b = log(Real64(ctx.checkpoint_b(k)));
    const BigInt q2 = ctx.q_next_even(k, m);
    if (!(eval_log(d, q2) + ln_eps - ln_b > slack_margin())) return false;
    return eval_log(c, q2) < ln_b - ln_N - slack_margin();
  }

  // d is nondecreasing and q_{2i+2} is affine increasing in m, so the
  // d-condition is a monotone threshold in m.
  std::optional<BigInt> minimal_m(const StageCtx& ctx, const BigInt& k,
                                  const BigInt& m_cap) const {
    const Real64 threshold =
        log(Real64(ctx.checkpoint_b(k))) - ln_eps + slack_margin();
    auto ok = [&](const BigInt& m) {
      return eval_log(d, ctx.q_next_even(k, m)) > threshold;
    };
    if (ok(1)) return BigInt(1);
    BigInt lo = 1;  // known false
    BigInt hi = 2;
    while (!ok(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > m_cap) return std::nullopt;
    }
    while (hi - lo > 1) {
      BigInt mid = (lo + hi) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    return hi;
  }
};

}  // namespace

void ConstructionState::append_pair(const BigInt& k, const BigInt& m) {
  if (k < 1 || m < 1) throw SchedulerError("stage digits must be >= 1");
  BigInt q1 = 2 * k * q_even_ + q_odd_;
  BigInt q2 = m * q1 + q_even_;
  digits_.push_back(2 * k);
  digits_.push_back(m);
  k_sum_ += k;
  q_odd_ = q1;
  q_even_ = q2;
  ++stage_;
}

void SqueezeSpec::validate() const {
  if (cs.empty() || ds.empty()) throw EmptyFamily();
  auto rep = validate_family_order(cs, ds, order_checkpoints());
  if (!rep.pass) {
    std::string what = "family ordering hypotheses fail:";
    for (const auto& v : rep.violations) what += "\n  " + v;
    throw InfeasibleSpec(what);
  }
  for (const auto& e : cs) {
    if (!check_monotone_nondecreasing(e)) {
      throw InfeasibleSpec("c family member is not nondecreasing");
    }
  }
  for (const auto& e : ds) {
    if (!check_monotone_nondecreasing(e)) {
      throw InfeasibleSpec("d family member is not nondecreasing");
    }
  }
  const std::size_t sample = std::max<std::size_t>(stages, 8);
  n_schedule.validate(ScheduleKind::Divergent, sample);
  eps_schedule.validate(ScheduleKind::Vanishing, sample);
  if (!(n_schedule.value_at(sample) >= n_schedule.value_at(0))) {
    throw ScheduleViolation("N schedule does not grow");
  }
}

ChosenPair choose_next_pair(const ConstructionState& state, const SqueezeSpec& spec) {
  if (state.stage() >= spec.stages) {
    throw SchedulerError("all stages already chosen");
  }
  spec.validate();
  const StageCtx ctx(state);
  const SqueezeEval ev(spec, state.stage());

  std::optional<StageCertificate> near_miss;
  BigInt k = 1;
  while (k <= spec.k_cap) {
    auto m = ev.minimal_m(ctx, k, spec.m_cap);
    if (m) {
      StageCertificate cert = ev.certify(ctx, k, *m);
      if (*cert.slack1 > slack_margin() && *cert.slack2 > slack_margin()) {
        return ChosenPair{k, *m, std::move(cert)};
      }
      if (!near_miss || *cert.slack1 > *near_miss->slack1) near_miss = cert;
    } else if (!near_miss) {
      // m_cap exhausted before the d-condition turned true; report the cap
      // point so the caller can see how far off it was
      near_miss = ev.certify(ctx, k, spec.m_cap);
    }
    // exhaustive while cheap keeps the accepted k minimal; the doubling tail
    // still terminates when admissibility only appears at large k
    k = k < 4096 ? BigInt(k + 1) : BigInt(k * 2);
  }
  throw BudgetExceeded("stage " + std::to_string(state.stage()) +
                           ": no admissible (k, m) within caps k_cap=" +
                           spec.k_cap.str() + ", m_cap=" + spec.m_cap.str(),
                       near_miss);
}

std::pair<IntRange, IntRange> robustness_window(const ConstructionState& state,
                                                const SqueezeSpec& spec,
                                                const BigInt& k, const BigInt& m) {
  const StageCtx ctx(state);
  const SqueezeEval ev(spec, state.stage());
  constexpr int kMaxDelta = 8;

  bool adm[kMaxDelta + 1][kMaxDelta + 1];
  for (int dk = 0; dk <= kMaxDelta; ++dk) {
    for (int dm = 0; dm <= kMaxDelta; ++dm) {
      adm[dk][dm] = ev.admissible(ctx, k + dk, m + dm);
    }
  }
  if (!adm[0][0]) {
    throw SchedulerError("robustness window requested for an inadmissible pair");
  }
  int best_dk = 0, best_dm = 0;
  BigInt best_area = 1;
  for (int dk = 0; dk <= kMaxDelta; ++dk) {
    for (int dm = 0; dm <= kMaxDelta; ++dm) {
      bool all = true;
      for (int a = 0; a <= dk && all; ++a) {
        for (int b = 0; b <= dm && all; ++b) all = adm[a][b];
      }
      if (!all) continue;
      BigInt area = BigInt(dk + 1) * (dm + 1);
      if (area > best_area || (area == best_area && dk > best_dk)) {
        best_area = area;
        best_dk = dk;
        best_dm = dm;
      }
    }
  }
  return {IntRange{k, k + best_dk}, IntRange{m, m + best_dm}};
}

namespace {

// Reports the first verified index past the last squeeze violation; b is
// piecewise constant, c and d are monotone, so each plateau needs only an
// endpoint check or a binary search.
struct OnsetScan {
  std::uint64_t last_violation = 0;
  bool any_violation = false;

  void note(std::uint64_t n) {
    any_violation = true;
    last_violation = std::max(last_violation, n);
  }
};

void scan_plateau(const std::vector<std::int64_t>& b, std::uint64_t n1,
                  std::uint64_t n2, const ExprPtr& c, const ExprPtr& d,
                  OnsetScan& scan) {
  const Real64 ln_b = log(Real64(b[n1]));
  // c-side: need ln c(n) < ln b; c nondecreasing, so check the plateau end
  if (!(eval_log(c, BigInt(n2)) < ln_b)) scan.note(n2);
  // d-side: need ln b < ln d(n); violations form a prefix of the plateau
  if (!(ln_b < eval_log(d, BigInt(n1)))) {
    if (!(ln_b < eval_log(d, BigInt(n2)))) {
      scan.note(n2);
    } else {
      std::uint64_t lo = n1, hi = n2;  // lo violating, hi fine
      while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        (ln_b < eval_log(d, BigInt(mid)) ? hi : lo) = mid;
      }
      scan.note(lo);
    }
  }
}

void verify_onset(BuildResult& result, const ExprPtr& c, const ExprPtr& d,
                  std::uint64_t verify_horizon) {
  auto cv = convergents(result.digits);
  const BigInt& q_total = cv.back().q;
  // the prefix certifies every point up to (q_L - 1)/2 without extension
  BigInt h = (q_total - 1) / 2;
  if (h > verify_horizon) h = verify_horizon;
  if (h < 1) return;
  const std::uint64_t H = h.convert_to<std::uint64_t>();

  auto series = discrepancy_series(OrbitConfig{BigRat(0), result.digits, H});
  OnsetScan scan;
  std::uint64_t n1 = 1;
  for (std::uint64_t n = 2; n <= H; ++n) {
    if (series.b[n] != series.b[n1]) {
      scan_plateau(series.b, n1, n - 1, c, d, scan);
      n1 = n;
    }
  }
  scan_plateau(series.b, n1, H, c, d, scan);

  result.verified_to = H;
  if (!scan.any_violation) {
    result.onset_n0 = 1;
    result.onset_found = true;
  } else if (scan.last_violation < H) {
    result.onset_n0 = scan.last_violation + 1;
    result.onset_found = true;
  } else {
    result.onset_found = false;
  }
  if (cv.size() >= 4 && BigInt(H) < cv[3].q) result.horizon_warning = true;
}

}  // namespace

BuildResult build_alpha(const SqueezeSpec& spec, std::uint64_t verify_horizon) {
  spec.validate();
  ConstructionState state;
  BuildResult result;
  for (std::size_t i = 0; i < spec.stages; ++i) {
    ChosenPair pick = choose_next_pair(state, spec);
    auto [kw, mw] = robustness_window(state, spec, pick.k, pick.m);
    pick.certificate.k_window = kw;
    pick.certificate.m_window = mw;
    result.certificates.push_back(std::move(pick.certificate));
    state.append_pair(pick.k, pick.m);
  }
  result.digits = state.digits();
  if (spec.stages > 0 && verify_horizon > 0) {
    verify_onset(result, spec.cs.back(), spec.ds.back(), verify_horizon);
  }
  return result;
}

BuildResult build_alpha_slow(const std::vector<ExprPtr>& cs, std::size_t stages,
                             const BigInt& m_cap, const ScheduleExpr& n_schedule) {
  if (cs.empty()) throw EmptyFamily();
  for (const auto& c : cs) {
    if (!check_monotone_nondecreasing(c)) {
      throw InfeasibleSpec("slow-mode c member is not nondecreasing");
    }
  }
  n_schedule.validate(ScheduleKind::Divergent, std::max<std::size_t>(stages, 8));

  ConstructionState state;
  BuildResult result;
  for (std::size_t s = 0; s < stages; ++s) {
    const StageCtx ctx(state);
    const ExprPtr c = family_at(cs, s);
    const Real64 ln_N = n_schedule.log_at(s);
    const Real64 ln_b = log(Real64(ctx.checkpoint_b(1)));  // k = 1 every stage
    const Real64 threshold = ln_b + ln_N + slack_margin();
    auto ok = [&](const BigInt& m) {
      return eval_log(c, ctx.q_next_even(1, m)) > threshold;
    };
    BigInt m;
    if (ok(1)) {
      m = 1;
    } else {
      BigInt lo = 1, hi = 2;
      while (!ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > m_cap) {
          throw BudgetExceeded("slow stage " + std::to_string(s) +
                                   ": m_cap=" + m_cap.str() + " exhausted",
                               std::nullopt);
        }
      }
      while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
      }
      m = hi;
    }
    StageCertificate cert;
    cert.mode = "slow";
    cert.stage = s;
    cert.k = 1;
    cert.m = m;
    cert.q_odd = ctx.q_next_odd(1);
    cert.q_even = ctx.q_next_even(1, m);
    cert.ln_b = ln_b;
    cert.ln_N = ln_N;
    cert.ln_c = eval_log(c, cert.q_even);
    cert.slack1 = *cert.ln_c - ln_b - ln_N;
    cert.k_window = IntRange{1, 1};
    cert.m_window = IntRange{m, m};
    result.certificates.push_back(std::move(cert));
    state.append_pair(1, m);
  }
  result.digits = state.digits();
  return result;
}

BuildResult build_alpha_fast(const std::vector<ExprPtr>& ds, std::size_t stages,
                             const BigInt& k_cap, const ScheduleExpr& n_schedule) {
  if (ds.empty()) throw EmptyFamily();
  auto cps = order_checkpoints();
  for (const auto& d : ds) {
    if (!check_monotone_nondecreasing(d)) {
      throw InfeasibleSpec("fast-mode d member is not nondecreasing");
    }
    // d_n/n -> 0 proxy: the gap to ln n must widen along the checkpoints
    Real64 prev_gap = log(Real64(cps.front())) - eval_log(d, cps.front());
    for (std::size_t t = 1; t < cps.size(); ++t) {
      Real64 gap = log(Real64(cps[t])) - eval_log(d, cps[t]);
      if (!(gap > prev_gap)) {
        throw InfeasibleSpec("fast-mode d member is not sublinear");
      }
      prev_gap = gap;
    }
  }
  n_schedule.validate(ScheduleKind::Divergent, std::max<std::size_t>(stages, 8));

  ConstructionState state;
  BuildResult result;
  for (std::size_t s = 0; s < stages; ++s) {
    const StageCtx ctx(state);
    const ExprPtr d = family_at(ds, s);
    const Real64 ln_N = n_schedule.log_at(s);
    auto ok = [&](const BigInt& k) {
      return log(Real64(ctx.checkpoint_b(k))) >
             eval_log(d, ctx.q_next_even(k, 1)) + ln_N + slack_margin();
    };
    BigInt k;
    if (ok(1)) {
      k = 1;
    } else {
      BigInt lo = 1, hi = 2;
      while (!ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > k_cap) {
          throw BudgetExceeded("fast stage " + std::to_string(s) +
                                   ": k_cap=" + k_cap.str() + " exhausted",
                               std::nullopt);
        }
      }
      while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
      }
      k = hi;
    }
    StageCertificate cert;
    cert.mode = "fast";
    cert.stage = s;
    cert.k = k;
    cert.m = 1;
    cert.q_odd = ctx.q_next_odd(k);
    cert.q_even = ctx.q_next_even(k, 1);
    cert.ln_b = log(Real64(ctx.checkpoint_b(k)));
    cert.ln_N = ln_N;
    cert.ln_d = eval_log(d, cert.q_even);
    cert.slack1 = cert.ln_b - *cert.ln_d - ln_N;
    cert.k_window = IntRange{k, k};
    cert.m_window = IntRange{1, 1};
    result.certificates.push_back(std::move(cert));
    state.append_pair(k, 1);
  }
  result.digits = state.digits();
  return result;
}

}  // namespace rotdisc
