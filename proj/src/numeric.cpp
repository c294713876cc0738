#include "rotdisc/numeric.hpp"

#include <stdexcept>

namespace rotdisc {

BigInt parse_big_uint(const std::string& text) {
  auto epos = text.find_first_of("eE");
  try {
    if (epos == std::string::npos) return BigInt(text);
    BigInt mantissa(text.substr(0, epos));
    int exp = std::stoi(text.substr(epos + 1));
    if (exp < 0) throw std::invalid_argument("negative exponent");
    return mantissa * pow(BigInt(10), exp);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a nonnegative integer: '" + text + "'");
  }
}

BigRat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return BigRat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

std::string rational_to_string(const BigRat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string real_to_string(const Real64& v) { return v.str(40); }

}  // namespace rotdisc
