#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace jetlag {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// r^k for integer k (k may be negative; r must be nonzero then).
Rational rat_pow_int(const Rational& r, const BigInt& k);

/// Exact r^(p/q) when both numerator and denominator of r are perfect
/// q-th powers (with sign handling for odd q); nullopt otherwise.
std::optional<Rational> rat_pow_exact(const Rational& base, const Rational& exp);

std::string rat_to_string(const Rational& r);

/// FNV-1a over the decimal representation; stable across runs.
std::uint64_t rat_hash(const Rational& r);

}  // namespace jetlag
