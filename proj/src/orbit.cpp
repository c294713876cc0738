#include "rotdisc/orbit.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <thread>

namespace rotdisc {

namespace {

constexpr std::uint64_t kMaxHorizon = 500'000'000;

BigInt floor_div(const BigInt& a, const BigInt& b) {
  // nonnegative operands only in this file
  return a / b;
}

BigRat frac(const BigRat& z) {
  BigInt fl = floor_div(numerator(z), denominator(z));
  return z - BigRat(fl);
}

// Residue-grid scanner over one pair of consecutive convergents (K, K+1).
// r_n = frac(x + n p_K/q_K) = t_n / D with D = v q_K; the true point is
// r_n + n*theta with theta = alpha - p_K/q_K, sign fixed by the parity of K
// and |n*theta| < n v / (D q_{K+1}).
struct Scanner {
  Scanner(const BigRat& x, const DigitSequence& digits, std::uint64_t horizon)
      : digits_(digits) {
    if (x < 0 || x >= 1) throw BadOrbitPoint("x must lie in [0,1)");
    u_ = numerator(x);
    v_ = denominator(x);
    auto cv = convergents(digits);
    const BigInt need = 2 * v_ * BigInt(horizon);
    if (cv.size() < 2) {
      throw InsufficientPrecision(0, need * cv.back().q + 1,
                                  cv.back().q);
    }
    // smallest K with q_{K+1} > 2 v N certifies every non-boundary point in
    // one shot; otherwise fall back to the deepest pair plus exact-interval
    // rescue per ambiguous point.
    std::size_t K = cv.size() - 1;
    for (std::size_t j = 1; j < cv.size(); ++j) {
      if (cv[j].q > need) {
        K = j;
        break;
      }
    }
    p_ = cv[K - 1].p;
    q_ = cv[K - 1].q;
    q_next_ = cv[K].q;
    theta_pos_ = (K % 2 == 0);
    D_ = v_ * q_;
    DQ_ = D_ * q_next_;
    s_ = (v_ * p_) % D_;
    t_ = (u_ * q_) % D_;
  }

  Classification classify(std::uint64_t n) const {
    const BigInt two_t = 2 * t_;
    if (n == 0) {
      // the point is exactly x; [0,1/2] closed.
      return two_t <= D_ ? Classification::Lower : Classification::Upper;
    }
    if (t_ == 0) {
      return theta_pos_ ? Classification::Lower : Classification::Upper;
    }
    if (two_t == D_) {
      return theta_pos_ ? Classification::Upper : Classification::Lower;
    }
    const BigInt U = t_ * q_next_;
    const BigInt nv = BigInt(n) * v_;
    if (two_t < D_) {
      if (theta_pos_) {
        if (2 * (U + nv) <= DQ_) return Classification::Lower;
      } else {
        if (U >= nv) return Classification::Lower;
      }
    } else {
      if (theta_pos_) {
        if (U + nv <= DQ_) return Classification::Upper;
      } else {
        if (2 * (U - nv) >= DQ_) return Classification::Upper;
      }
    }
    return classify_exact(n);
  }

  void advance() {
    t_ += s_;
    if (t_ >= D_) t_ -= D_;
  }

 private:
  // Exact interval over every completion of the prefix; throws if completions
  // genuinely disagree about the side.
  Classification classify_exact(std::uint64_t n) const {
    auto [A, B] = completion_range(digits_);
    const BigRat x(u_, v_);
    const BigRat za = x + BigInt(n) * A;
    const BigRat zb = x + BigInt(n) * B;
    const BigInt fla = floor_div(numerator(za), denominator(za));
    const BigInt flb = floor_div(numerator(zb), denominator(zb));
    if (fla == flb) {
      const BigRat fa = za - BigRat(fla);
      const BigRat fb = zb - BigRat(flb);
      const BigRat half(1, 2);
      if (fb <= half) return Classification::Lower;
      if (fa >= half) return Classification::Upper;
    }
    throw InsufficientPrecision(n, 2 * v_ * BigInt(n) * q_ + 1, q_ * q_next_);
  }

  DigitSequence digits_;
  BigInt u_, v_;
  BigInt p_, q_, q_next_;
  BigInt D_, DQ_, s_, t_;
  bool theta_pos_ = false;
};

}  // namespace

Classification classify_point(const BigRat& x, std::uint64_t n,
                              const DigitSequence& digits) {
  Scanner sc(x, digits, n);
  for (std::uint64_t i = 0; i < n; ++i) sc.advance();
  return sc.classify(n);
}

DiscrepancySeries discrepancy_series(const OrbitConfig& config) {
  const std::uint64_t N = config.horizon;
  if (N > kMaxHorizon) {
    throw OrbitError("horizon " + std::to_string(N) + " exceeds scan limit");
  }
  Scanner sc(config.x, config.digits, N);
  DiscrepancySeries out;
  out.a.resize(N + 1);
  out.b.resize(N + 1);
  out.a[0] = 0;
  out.b[0] = 0;
  for (std::uint64_t n = 0; n < N; ++n) {
    const auto cls = sc.classify(n);
    out.a[n + 1] = out.a[n] + (cls == Classification::Lower ? 1 : -1);
    const std::int64_t mag = out.a[n + 1] < 0 ? -out.a[n + 1] : out.a[n + 1];
    out.b[n + 1] = std::max(out.b[n], mag);
    sc.advance();
  }
  return out;
}

namespace {

std::uint64_t to_horizon(const BigInt& q) {
  if (q > kMaxHorizon) {
    throw OrbitError("checkpoint q=" + q.str() + " exceeds scan limit");
  }
  return q.convert_to<std::uint64_t>();
}

}  // namespace

QIndexReport verify_qindex_identity(const DigitSequence& digits, std::size_t stage) {
  if (digits.tag() != StructureTag::Alternating) throw NotAlternating();
  if (stage == 0 || stage > digits.stages()) {
    throw NotEnoughStages(stage, digits.stages());
  }
  auto cv = convergents(digits);
  QIndexReport rep;
  rep.stage = stage;
  rep.q_odd = cv[2 * stage - 2].q;
  rep.q_even = cv[2 * stage - 1].q;
  rep.expected = 1;
  for (std::size_t j = 1; j <= stage; ++j) rep.expected += digits.stage_k(j);

  OrbitConfig cfg{BigRat(0), digits, to_horizon(rep.q_even)};
  auto series = discrepancy_series(cfg);
  rep.observed_at_q_odd = series.b[to_horizon(rep.q_odd)];
  rep.observed_at_q_even = series.b[to_horizon(rep.q_even)];
  rep.pass = BigInt(rep.observed_at_q_odd) == rep.expected &&
             BigInt(rep.observed_at_q_even) == rep.expected;
  return rep;
}

BandReport verify_all_x_band(const DigitSequence& digits, std::size_t stage,
                             const std::vector<BigRat>& xs, unsigned threads) {
  if (digits.tag() != StructureTag::Alternating) throw NotAlternating();
  if (stage == 0 || stage > digits.stages()) {
    throw NotEnoughStages(stage, digits.stages());
  }
  auto cv = convergents(digits);
  BandReport rep;
  rep.stage = stage;
  rep.q_lo = cv[2 * stage - 2].q;
  rep.q_hi = cv[2 * stage - 1].q;
  rep.k_sum = 0;
  for (std::size_t j = 1; j <= stage; ++j) rep.k_sum += digits.stage_k(j);
  rep.per_x.resize(xs.size());

  const bool has_bridge = digits.size() >= 2 * stage + 1;
  const std::uint64_t n_lo = to_horizon(rep.q_lo);
  const std::uint64_t n_hi = to_horizon(rep.q_hi);
  const std::uint64_t n_bridge = has_bridge ? to_horizon(cv[2 * stage].q) : n_hi;
  BigInt k_sum_next = rep.k_sum;
  if (digits.stages() >= stage + 1) k_sum_next += digits.stage_k(stage + 1);

  auto run_one = [&](std::size_t idx) {
    BandEntry e;
    e.x = xs[idx];
    DiscrepancySeries series;
    bool bridged = has_bridge;
    try {
      series = discrepancy_series(OrbitConfig{xs[idx], digits, n_bridge});
    } catch (const InsufficientPrecision&) {
      if (!has_bridge) throw;
      bridged = false;
      series = discrepancy_series(OrbitConfig{xs[idx], digits, n_hi});
    }
    e.min_b = series.b[n_lo];
    e.max_b = series.b[n_lo];
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
      e.min_b = std::min(e.min_b, series.b[n]);
      e.max_b = std::max(e.max_b, series.b[n]);
    }
    e.weak_pass = BigInt(e.min_b) >= rep.k_sum && BigInt(e.max_b) <= rep.k_sum + 2;
    e.strict_pass = BigInt(e.min_b) == rep.k_sum + 1 && BigInt(e.max_b) == rep.k_sum + 1;
    if (bridged && has_bridge) {
      e.bridge_checked = true;
      std::int64_t bmax = 0;
      for (std::uint64_t n = n_hi; n <= n_bridge; ++n) {
        bmax = std::max(bmax, series.b[n]);
      }
      e.bridge_pass = BigInt(bmax) <= 1 + k_sum_next;
    }
    rep.per_x[idx] = std::move(e);
  };

  unsigned workers = threads ? threads : std::thread::hardware_concurrency();
  if (workers < 1) workers = 1;
  workers = std::min<unsigned>(workers, xs.size() ? xs.size() : 1);
  if (workers <= 1 || xs.size() <= 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) run_one(i);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) run_one(i);
      }));
    }
    for (auto& f : futs) f.get();
  }

  for (const auto& e : rep.per_x) {
    if (e.strict_pass) ++rep.strict_count;
    if (!e.weak_pass) rep.all_weak_pass = false;
  }
  return rep;
}

}  // namespace rotdisc
