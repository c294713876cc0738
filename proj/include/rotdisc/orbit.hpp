#pragma once

#include "rotdisc/cf.hpp"
#include "rotdisc/numeric.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rotdisc {

struct OrbitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the digit prefix cannot decide the side of a boundary for some
// orbit point: no completion-independent classification exists at this depth.
struct InsufficientPrecision : OrbitError {
  InsufficientPrecision(std::uint64_t n, BigInt needed_q_product, BigInt available)
      : OrbitError("cannot certify orbit point n=" + std::to_string(n) +
                   ": need consecutive convergents with q_K*q_{K+1} >= " +
                   needed_q_product.str() + " (available " + available.str() +
                   "); extend the digit prefix"),
        at_n(n),
        required_q_product(std::move(needed_q_product)),
        available_q_product(std::move(available)) {}
  std::uint64_t at_n;
  BigInt required_q_product;
  BigInt available_q_product;
};

struct NotAlternating : OrbitError {
  NotAlternating() : OrbitError("digit list is not tagged Alternating") {}
};
struct NotEnoughStages : OrbitError {
  NotEnoughStages(std::size_t want, std::size_t have)
      : OrbitError("stage " + std::to_string(want) + " requested but only " +
                   std::to_string(have) + " full (2k,m) stages present") {}
};
struct BadOrbitPoint : OrbitError {
  explicit BadOrbitPoint(const std::string& what) : OrbitError(what) {}
};

// Side of the orbit point relative to 1/2: Lower <=> {x+n*alpha} in [0,1/2].
enum class Classification { Lower, Upper };

struct OrbitConfig {
  BigRat x;             // in [0,1), exact
  DigitSequence digits; // prefix pinning alpha
  std::uint64_t horizon = 0;
};

// a_0..a_N and running maxima b_0..b_N.  a_n = #{i<n: Lower} - #{i<n: Upper}.
struct DiscrepancySeries {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

Classification classify_point(const BigRat& x, std::uint64_t n,
                              const DigitSequence& digits);

DiscrepancySeries discrepancy_series(const OrbitConfig& config);

struct QIndexReport {
  std::size_t stage = 0;
  BigInt q_odd;      // q_{2i-1}
  BigInt q_even;     // q_{2i}
  BigInt expected;   // 1 + k_1 + ... + k_i
  std::int64_t observed_at_q_odd = 0;
  std::int64_t observed_at_q_even = 0;
  bool pass = false;
};

// Checks b_{q_{2i-1}} = b_{q_{2i}} = 1 + k_1 + ... + k_i at x = 0.
QIndexReport verify_qindex_identity(const DigitSequence& digits, std::size_t stage);

struct BandEntry {
  BigRat x;
  std::int64_t min_b = 0;
  std::int64_t max_b = 0;
  bool weak_pass = false;    // K_i <= b_n <= K_i+2 on [q_{2i-1}, q_{2i}]
  bool strict_pass = false;  // b_n == K_i+1 throughout
  bool bridge_checked = false;
  bool bridge_pass = false;  // b_n <= 1+K_{i+1} on [q_{2i}, q_{2i+1}]
};

struct BandReport {
  std::size_t stage = 0;
  BigInt k_sum;  // K_i
  BigInt q_lo;   // q_{2i-1}
  BigInt q_hi;   // q_{2i}
  std::vector<BandEntry> per_x;
  std::size_t strict_count = 0;
  bool all_weak_pass = true;
};

BandReport verify_all_x_band(const DigitSequence& digits, std::size_t stage,
                             const std::vector<BigRat>& xs,
                             unsigned threads = 0 /* 0 = hardware */);

}  // namespace rotdisc
