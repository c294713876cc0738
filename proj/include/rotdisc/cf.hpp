#pragma once

#include "rotdisc/numeric.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rotdisc {

struct CfError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyDigits : CfError {
  EmptyDigits() : CfError("digit list is empty") {}
};
struct NonPositiveDigit : CfError {
  explicit NonPositiveDigit(std::size_t pos)
      : CfError("digit at position " + std::to_string(pos + 1) + " is not >= 1") {}
};
struct PrefixTooShort : CfError {
  explicit PrefixTooShort(std::size_t len)
      : CfError("bracket needs at least 2 digits, got " + std::to_string(len)) {}
};
struct StructureViolation : CfError {
  explicit StructureViolation(const std::string& what) : CfError(what) {}
};

enum class StructureTag { Plain, Alternating };

// A finite prefix of continued-fraction digits n_1, n_2, ... for a value in
// (0,1).  The Alternating tag asserts the [2k_1, m_1, 2k_2, m_2, ...] pattern:
// even length, every odd-position digit even and >= 2.
class DigitSequence {
 public:
  DigitSequence() = default;
  explicit DigitSequence(std::vector<BigInt> digits,
                         StructureTag tag = StructureTag::Plain);

  // Comma-separated decimal integers, e.g. "2,1,2,1".
  static DigitSequence parse(const std::string& csv,
                             StructureTag tag = StructureTag::Plain);

  const std::vector<BigInt>& digits() const { return digits_; }
  StructureTag tag() const { return tag_; }
  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  const BigInt& operator[](std::size_t i) const { return digits_[i]; }

  // Number of complete (2k, m) pairs; Alternating only.
  std::size_t stages() const { return digits_.size() / 2; }
  // k_j for 1-based stage j (odd-position digit halved).
  BigInt stage_k(std::size_t j) const { return digits_[2 * (j - 1)] / 2; }
  BigInt stage_m(std::size_t j) const { return digits_[2 * (j - 1) + 1]; }

  std::string to_csv() const;

  bool operator==(const DigitSequence&) const = default;

 private:
  std::vector<BigInt> digits_;
  StructureTag tag_ = StructureTag::Plain;
};

struct Convergent {
  std::size_t index = 0;  // 1-based
  BigInt p;
  BigInt q;
};

// Exact rational interval certified to contain every infinite completion of a
// digit prefix.  Endpoints are the last two convergents; width is exactly
// 1/(q_{K} q_{K+1}).
struct AlphaBracket {
  BigRat lo;
  BigRat hi;
  std::size_t depth = 0;  // K: index of the lower-depth endpoint convergent

  BigRat midpoint() const { return (lo + hi) / 2; }
  BigRat width() const { return hi - lo; }
};

// One Convergent per digit via p_j = n_j p_{j-1} + p_{j-2},
// q_j = n_j q_{j-1} + q_{j-2}, seeds p_0=0, q_0=1, p_{-1}=1, q_{-1}=0.
// Odd-index convergents lie above the value, even-index below.
std::vector<Convergent> convergents(const DigitSequence& digits);

AlphaBracket bracket(const DigitSequence& digits);

// Tightest rational range (open interval) containing every completion:
// bounded by the mediant (p_L+p_{L-1})/(q_L+q_{L-1}) and p_L/q_L.
std::pair<BigRat, BigRat> completion_range(const DigitSequence& digits);

DigitSequence extend(const DigitSequence& digits, const std::vector<BigInt>& more);

}  // namespace rotdisc
