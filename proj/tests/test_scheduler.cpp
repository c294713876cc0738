#include "rotdisc/scheduler.hpp"

#include "rotdisc/orbit.hpp"

#include "oracle.hpp"

#include <doctest.h>

using namespace rotdisc;

namespace {

SqueezeSpec make_spec(std::vector<std::string> cs, std::vector<std::string> ds,
                      std::size_t stages) {
  SqueezeSpec spec;
  for (const auto& s : cs) {
    spec.cs.push_back(parse_expr(s));
    spec.c_sources.push_back(s);
  }
  for (const auto& s : ds) {
    spec.ds.push_back(parse_expr(s));
    spec.d_sources.push_back(s);
  }
  spec.stages = stages;
  return spec;
}

oracle::StageOracle stage_oracle(const ConstructionState& state,
                                 const SqueezeSpec& spec) {
  std::size_t i = state.stage();
  oracle::StageOracle o;
  o.q_even_prev = state.q_even();
  o.q_odd_prev = state.q_odd();
  o.k_sum = state.k_sum();
  o.c = spec.cs[std::min(i, spec.cs.size() - 1)];
  o.d = spec.ds[std::min(i, spec.ds.size() - 1)];
  o.N = oracle::Real200(spec.n_schedule.value_at(i).str(64));
  o.eps = oracle::Real200(spec.eps_schedule.value_at(i).str(64));
  return o;
}

bool certs_equal(const StageCertificate& a, const StageCertificate& b) {
  return a.k == b.k && a.m == b.m && a.q_odd == b.q_odd && a.q_even == b.q_even &&
         a.ln_b == b.ln_b && a.k_window.lo == b.k_window.lo &&
         a.k_window.hi == b.k_window.hi && a.m_window.lo == b.m_window.lo &&
         a.m_window.hi == b.m_window.hi;
}

}  // namespace

TEST_CASE("choose_next_pair: first stage is the minimal admissible pair") {
  auto spec = make_spec({"n^0.25"}, {"n^0.75"}, 1);
  spec.validate();
  ConstructionState state;
  auto chosen = choose_next_pair(state, spec);

  auto o = stage_oracle(state, spec);
  CHECK(o.admissible(chosen.k, chosen.m));

  // exhaustive search: no admissible pair with smaller k, and no smaller m at
  // the chosen k
  bool smaller_k = false;
  for (BigInt k = 1; k < chosen.k; ++k) {
    for (BigInt m = 1; m <= 1000000; ++m) {
      if (o.admissible(k, m)) {
        smaller_k = true;
        break;
      }
    }
  }
  CHECK_FALSE(smaller_k);
  for (BigInt m = 1; m < chosen.m; ++m) CHECK_FALSE(o.admissible(chosen.k, m));

  CHECK(chosen.certificate.slack1.has_value());
  CHECK(chosen.certificate.slack2.has_value());
  CHECK(*chosen.certificate.slack1 > 0);
  CHECK(*chosen.certificate.slack2 > 0);
}

TEST_CASE("robustness_window: every pair in the product re-checks admissible") {
  auto spec = make_spec({"n^0.2"}, {"n^0.8"}, 1);
  ConstructionState state;
  auto chosen = choose_next_pair(state, spec);
  auto [kw, mw] = robustness_window(state, spec, chosen.k, chosen.m);
  CHECK(kw.lo == chosen.k);
  CHECK(mw.lo == chosen.m);
  CHECK(kw.hi - kw.lo <= 8);
  CHECK(mw.hi - mw.lo <= 8);
  auto o = stage_oracle(state, spec);
  for (BigInt k = kw.lo; k <= kw.hi; ++k)
    for (BigInt m = mw.lo; m <= mw.hi; ++m) CHECK(o.admissible(k, m));
  // branching room: at least two choices in one coordinate
  CHECK(kw.count() + mw.count() >= 3);
}

TEST_CASE("build_alpha: six-stage squeeze") {
  auto spec = make_spec({"n^0.2", "n^0.25"}, {"n^0.8", "n^0.75"}, 6);
  auto res = build_alpha(spec);
  CHECK(res.digits.size() == 12);
  CHECK(res.digits.tag() == StructureTag::Alternating);
  REQUIRE(res.certificates.size() == 6);
  for (const auto& cert : res.certificates) {
    CHECK(*cert.slack1 > 0);
    CHECK(*cert.slack2 > 0);
    CHECK(cert.mode == "squeeze");
  }
  CHECK(res.onset_found);
  CHECK(res.onset_n0 >= 1);
  CHECK(res.verified_to >= res.onset_n0);

  // certificate q values equal convergents recomputed from the digits
  auto cv = convergents(res.digits);
  for (std::size_t i = 0; i < res.certificates.size(); ++i) {
    CHECK(res.certificates[i].q_odd == cv[2 * i].q);
    CHECK(res.certificates[i].q_even == cv[2 * i + 1].q);
  }

  // per-stage admissibility against the value-domain oracle
  ConstructionState state;
  for (const auto& cert : res.certificates) {
    auto o = stage_oracle(state, spec);
    CHECK(o.admissible(cert.k, cert.m));
    state.append_pair(cert.k, cert.m);
  }

  // q-index identity at every stage the horizon covers
  for (std::size_t stage = 1; stage <= 2; ++stage) {
    CHECK(verify_qindex_identity(res.digits, stage).pass);
  }

  // determinism
  auto res2 = build_alpha(spec);
  CHECK(res2.digits == res.digits);
  for (std::size_t i = 0; i < res.certificates.size(); ++i) {
    CHECK(certs_equal(res.certificates[i], res2.certificates[i]));
  }
}

TEST_CASE("build_alpha: degenerate stage counts") {
  auto spec0 = make_spec({"n^0.25"}, {"n^0.75"}, 0);
  auto res0 = build_alpha(spec0);
  CHECK(res0.digits.empty());
  CHECK(res0.certificates.empty());

  auto spec1 = make_spec({"n^0.25"}, {"n^0.75"}, 1);
  auto res1 = build_alpha(spec1);
  ConstructionState state;
  auto chosen = choose_next_pair(state, spec1);
  REQUIRE(res1.certificates.size() == 1);
  CHECK(res1.certificates[0].k == chosen.k);
  CHECK(res1.certificates[0].m == chosen.m);
}

TEST_CASE("spec validation rejects a crossed family") {
  auto bad = make_spec({"n^0.8"}, {"n^0.2"}, 2);
  CHECK_THROWS_AS(bad.validate(), InfeasibleSpec);
  auto empty = make_spec({}, {"n^0.5"}, 2);
  CHECK_THROWS_AS(empty.validate(), EmptyFamily);
}

TEST_CASE("budget caps surface as BudgetExceeded with a near miss") {
  auto spec = make_spec({"n^0.2"}, {"n^0.8"}, 3);
  spec.m_cap = 2;
  try {
    build_alpha(spec);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.near_miss.has_value());
  }
}

TEST_CASE("build_alpha_slow: unit k digits, certified slow growth") {
  auto res = build_alpha_slow({parse_expr("log(n+2)")}, 4);
  REQUIRE(res.digits.size() == 8);
  for (std::size_t j = 0; j < 4; ++j) CHECK(res.digits[2 * j] == 2);
  REQUIRE(res.certificates.size() == 4);
  auto cv = convergents(res.digits);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& cert = res.certificates[j];
    CHECK(cert.mode == "slow");
    CHECK(cert.k == 1);
    CHECK(*cert.slack1 > 0);
    // value-domain recheck: c(q_{2j+2}) > (2+j) * N_j, i.e. b/c < 1/N
    oracle::Real200 c_val =
        oracle::eval_value_200(parse_expr("log(n+2)"), oracle::Real200(cv[2 * j + 1].q));
    oracle::Real200 b_val(2 + j);
    CHECK(c_val > b_val * oracle::Real200(j + 1));
    if (j >= 1) CHECK(res.digits[2 * j + 1] > res.digits[2 * j - 1]);
  }
}

TEST_CASE("build_alpha_fast: unit m digits, certified fast growth") {
  auto res = build_alpha_fast({parse_expr("n^0.5")}, 4);
  REQUIRE(res.digits.size() == 8);
  for (std::size_t j = 0; j < 4; ++j) CHECK(res.digits[2 * j + 1] == 1);
  REQUIRE(res.certificates.size() == 4);
  auto cv = convergents(res.digits);
  BigInt k_sum = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& cert = res.certificates[j];
    CHECK(cert.mode == "fast");
    CHECK(cert.m == 1);
    CHECK(*cert.slack1 > 0);
    k_sum += cert.k;
    // value-domain recheck: 1+K > d(q_{2j+2}) * N_j
    oracle::Real200 d_val =
        oracle::eval_value_200(parse_expr("n^0.5"), oracle::Real200(cv[2 * j + 1].q));
    CHECK(oracle::Real200(1 + k_sum) > d_val * oracle::Real200(j + 1));
    if (j >= 1) CHECK(cert.k > res.certificates[j - 1].k);
  }
}

TEST_CASE("checkpoint values b_{q_{2i}} strictly increase across stages") {
  auto spec = make_spec({"n^0.2", "n^0.25"}, {"n^0.8", "n^0.75"}, 5);
  auto res = build_alpha(spec);
  BigInt prev = 0;
  BigInt k_sum = 0;
  for (const auto& cert : res.certificates) {
    k_sum += cert.k;
    BigInt b_checkpoint = 1 + k_sum;
    CHECK(b_checkpoint > prev);
    prev = b_checkpoint;
  }
}
