#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <string>

namespace rotdisc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// 64 significant decimal digits: enough that log-domain comparisons with
// margin > 1e-20 stay reliable after thousands of accumulated operations.
using Real64 = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<64>>;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

// Accepts "123456" or scientific shorthand "1e9" / "25e3" (integer mantissa).
BigInt parse_big_uint(const std::string& text);

// Parses "u/v" or "u" into an exact rational.
BigRat parse_rational(const std::string& text);

std::string rational_to_string(const BigRat& r);

// Fixed-width decimal rendering used in JSON output (40 significant digits).
std::string real_to_string(const Real64& v);

}  // namespace rotdisc
