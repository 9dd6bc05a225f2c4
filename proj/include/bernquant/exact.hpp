// Exact integer/rational helpers shared by the basis-conversion and lattice code.
#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace bernquant::exact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Float100 = boost::multiprecision::cpp_bin_float_100;

inline Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int c = 1;
    for (int j = 1; j <= k; ++j) {
        c *= n - j + 1;
        c /= j;  // divides exactly: c is C(n-j+1..n, j) after the loop body
    }
    return c;
}

// cpp_rational's two-argument constructor rejects negative denominators.
inline Rat make_rat(long long num, long long den) {
    if (den == 0) throw std::domain_error("make_rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rat(num, den);
}

// Doubles are dyadic rationals; the conversion below is exact.
inline Rat to_rational(double x) {
    if (!std::isfinite(x)) throw std::domain_error("to_rational: non-finite input");
    return Rat(x);
}

// Round to the nearest integer, ties to even.
inline Int round_half_even(const Rat& x) {
    const Int num = boost::multiprecision::numerator(x);
    const Int den = boost::multiprecision::denominator(x);  // den > 0
    Int q = num / den;                                      // truncates toward zero
    Int rem = num - q * den;
    if (rem < 0) { rem += den; q -= 1; }                    // floor division
    const Int twice = 2 * rem;
    if (twice > den) return q + 1;
    if (twice < den) return q;
    return (q % 2 == 0) ? q : q + 1;                        // exact half
}

inline double log2_int(const Int& v) {
    if (v <= 0) throw std::domain_error("log2_int: nonpositive");
    const auto bits = boost::multiprecision::msb(v);  // floor(log2 v)
    if (bits < 52) return std::log2(v.convert_to<double>());
    const Int top = v >> (bits - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

// Largest integer m with m^q <= base^p, for small positive p/q.
inline Int floor_root_pow(const Int& base, int p, int q) {
    if (base <= 0) throw std::domain_error("floor_root_pow: nonpositive base");
    if (q == 1) return boost::multiprecision::pow(base, p);
    const Int target = boost::multiprecision::pow(base, p);
    // Seed from the bit length, then binary search. Range is tiny.
    const double guess_log2 = log2_int(target) / q;
    Int lo = 1, hi = Int(1) << static_cast<unsigned>(guess_log2 + 2);
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, q) <= target) lo = mid; else hi = mid - 1;
    }
    return lo;
}

// Snap a double to p/q with q <= 64 when one is within 1e-12 (covers the
// dyadic alphas used in practice). Returns false when no small rational fits.
inline bool snap_to_rational(double alpha, int& p, int& q) {
    for (int den = 1; den <= 64; ++den) {
        const double scaled = alpha * den;
        const double near = std::nearbyint(scaled);
        if (std::abs(scaled - near) < 1e-12 * den) {
            p = static_cast<int>(near);
            q = den;
            const int g = static_cast<int>(std::gcd(static_cast<long long>(std::abs(p)),
                                                    static_cast<long long>(q)));
            if (g > 1) { p /= g; q /= g; }
            return true;
        }
    }
    return false;
}

// floor(base^alpha): exact via floor_root_pow when alpha snaps to a small
// rational, 100-digit floating floor otherwise.
inline Int floor_pow(const Int& base, double alpha) {
    if (alpha < 0) throw std::domain_error("floor_pow: negative exponent");
    if (alpha == 0.0 || base == 1) return 1;
    int p = 0, q = 1;
    if (snap_to_rational(alpha, p, q)) {
        if (p == 0) return 1;
        return floor_root_pow(base, p, q);
    }
    const Float100 b(base);
    const Float100 v = boost::multiprecision::exp(Float100(alpha) * boost::multiprecision::log(b));
    return boost::multiprecision::floor(v).convert_to<Int>();
}

}  // namespace bernquant::exact
