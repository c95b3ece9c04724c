#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qvaforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_zero(const Rational& q) { return q.is_zero(); }

inline BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

inline BigInt factorial(long n) {
    BigInt r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Rational inv_factorial(long n) { return Rational(1, factorial(n)); }

inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational scale_coeff(const Rational& c, const Rational& q) { return c * q; }

}  // namespace qvaforge
