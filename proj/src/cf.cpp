#include "rotdisc/cf.hpp"

#include <sstream>

namespace rotdisc {

namespace {

void check_digits(const std::vector<BigInt>& digits, StructureTag tag) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 1) throw NonPositiveDigit(i);
  }
  if (tag == StructureTag::Alternating) {
    if (digits.size() % 2 != 0) {
      throw StructureViolation("alternating digit list must have even length");
    }
    for (std::size_t i = 0; i < digits.size(); i += 2) {
      if (digits[i] < 2 || digits[i] % 2 != 0) {
        throw StructureViolation("digit at position " + std::to_string(i + 1) +
                                 " must be even and >= 2 in an alternating list");
      }
    }
  }
}

}  // namespace

DigitSequence::DigitSequence(std::vector<BigInt> digits, StructureTag tag)
    : digits_(std::move(digits)), tag_(tag) {
  check_digits(digits_, tag_);
}

DigitSequence DigitSequence::parse(const std::string& csv, StructureTag tag) {
  std::vector<BigInt> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    // trim blanks
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw CfError("empty digit in list: '" + csv + "'");
    item = item.substr(b, e - b + 1);
    try {
      out.emplace_back(item);
    } catch (const std::exception&) {
      throw CfError("not an integer digit: '" + item + "'");
    }
  }
  if (out.empty()) throw EmptyDigits();
  return DigitSequence(std::move(out), tag);
}

std::string DigitSequence::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out += ',';
    out += digits_[i].str();
  }
  return out;
}

std::vector<Convergent> convergents(const DigitSequence& digits) {
  if (digits.empty()) throw EmptyDigits();
  std::vector<Convergent> out;
  out.reserve(digits.size());
  BigInt p_prev = 1, q_prev = 0;  // j = -1
  BigInt p = 0, q = 1;            // j = 0
  for (std::size_t j = 0; j < digits.size(); ++j) {
    const BigInt& n = digits[j];
    BigInt p_next = n * p + p_prev;
    BigInt q_next = n * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    out.push_back(Convergent{j + 1, p, q});
  }
  return out;
}

AlphaBracket bracket(const DigitSequence& digits) {
  if (digits.size() < 2) throw PrefixTooShort(digits.size());
  auto cv = convergents(digits);
  const Convergent& a = cv[cv.size() - 2];
  const Convergent& b = cv[cv.size() - 1];
  BigRat ra(a.p, a.q), rb(b.p, b.q);
  AlphaBracket out;
  out.depth = a.index;
  if (ra < rb) {
    out.lo = ra;
    out.hi = rb;
  } else {
    out.lo = rb;
    out.hi = ra;
  }
  return out;
}

std::pair<BigRat, BigRat> completion_range(const DigitSequence& digits) {
  if (digits.empty()) throw EmptyDigits();
  auto cv = convergents(digits);
  BigInt p_prev = 0, q_prev = 1;  // j = 0 seed
  if (cv.size() >= 2) {
    p_prev = cv[cv.size() - 2].p;
    q_prev = cv[cv.size() - 2].q;
  }
  const Convergent& last = cv.back();
  BigRat end(last.p, last.q);
  BigRat mediant(last.p + p_prev, last.q + q_prev);
  return mediant < end ? std::pair{mediant, end} : std::pair{end, mediant};
}

DigitSequence extend(const DigitSequence& digits, const std::vector<BigInt>& more) {
  std::vector<BigInt> all = digits.digits();
  all.insert(all.end(), more.begin(), more.end());
  return DigitSequence(std::move(all), digits.tag());
}

}  // namespace rotdisc
