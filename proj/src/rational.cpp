#include "jetlag/rational.hpp"

#include <stdexcept>

namespace jetlag {

Rational rat_pow_int(const Rational& r, const BigInt& k) {
    if (k == 0) return Rational(1);
    if (r == 0 && k < 0) throw std::domain_error("rat_pow_int: 0 to a negative power");
    BigInt n = k < 0 ? BigInt(-k) : k;
    Rational base = k < 0 ? Rational(1) / r : r;
    Rational acc(1);
    while (n > 0) {
        if ((n & 1) != 0) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

namespace {

// Floor of the q-th root, q >= 1, v >= 0.
BigInt iroot(const BigInt& v, unsigned q) {
    if (v == 0 || v == 1 || q == 1) return v;
    BigInt lo = 0, hi = v < 2 ? v : BigInt(2);
    while (boost::multiprecision::pow(hi, q) <= v) hi <<= 1;
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) >> 1;
        if (boost::multiprecision::pow(mid, q) <= v)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::optional<BigInt> exact_root(const BigInt& v, unsigned q) {
    bool neg = v < 0;
    if (neg && q % 2 == 0) return std::nullopt;
    BigInt a = neg ? BigInt(-v) : v;
    BigInt r = iroot(a, q);
    if (boost::multiprecision::pow(r, q) != a) return std::nullopt;
    return neg ? BigInt(-r) : r;
}

}  // namespace

std::optional<Rational> rat_pow_exact(const Rational& base, const Rational& exp) {
    if (is_integer(exp)) return rat_pow_int(base, rat_num(exp));
    BigInt q = rat_den(exp);
    if (q > 64) return std::nullopt;
    auto rn = exact_root(rat_num(base), static_cast<unsigned>(q));
    auto rd = exact_root(rat_den(base), static_cast<unsigned>(q));
    if (!rn || !rd) return std::nullopt;
    Rational root(*rn, *rd);
    return rat_pow_int(root, rat_num(exp));
}

std::string rat_to_string(const Rational& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

std::uint64_t rat_hash(const Rational& r) {
    std::string s = rat_to_string(r);
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace jetlag
