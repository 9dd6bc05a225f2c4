// Bernstein basis evaluation, polynomials in Bernstein form, basis
// differences, variations, and binomial moments.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bernquant/exact.hpp"

namespace bernquant {

struct BernsteinPoly {
    int degree = 0;
    std::vector<double> coeffs;  // coefficient of p_{n,k} at index k
};

struct DiffSequence {
    int order = 0;
    std::vector<double> values;  // indexed k = 0..n; entries for k > n are zero by convention
};

namespace detail {

inline void check_x(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("x outside [0,1]");
}

inline void check_degree(int n) {
    if (n < 0) throw std::domain_error("negative degree");
}

// Exact C(n,k) for n <= 62 (fits in uint64 for all k at n = 62).
inline double binom_small(int n, int k) {
    std::uint64_t c = 1;
    if (k > n - k) k = n - k;
    for (int j = 1; j <= k; ++j) {
        c = c * static_cast<std::uint64_t>(n - j + 1) / static_cast<std::uint64_t>(j);
    }
    return static_cast<double>(c);
}

inline double kahan_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double t : v) {
        double y = t - c;
        double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

}  // namespace detail

// p_{n,k}(x) = C(n,k) x^k (1-x)^{n-k}. Exact combinatorics for n <= 30,
// log-gamma above (accurate to ~1e-11 relative at n ~ 4096).
inline double basis_value(int n, int k, double x) {
    detail::check_degree(n);
    detail::check_x(x);
    if (k < 0) throw std::domain_error("negative basis index");
    if (k > n) return 0.0;
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    if (x == 1.0) return k == n ? 1.0 : 0.0;
    if (n <= 30) {
        return detail::binom_small(n, k) * std::pow(x, k) * std::pow(1.0 - x, n - k);
    }
    const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lg + k * std::log(x) + (n - k) * std::log1p(-x));
}

// Full basis row (p_{n,0}(x), ..., p_{n,n}(x)) by a mode-anchored ratio
// recurrence with compensated normalization; the row sums to 1 up to a few
// eps, which the n ~ 4096 partition-of-unity checks need (per-entry log-gamma
// carries the quantization error of lgamma(n+1) ~ 3e-12 at that size).
inline std::vector<double> basis_row(int n, double x) {
    detail::check_degree(n);
    detail::check_x(x);
    std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
    if (x == 0.0) { row[0] = 1.0; return row; }
    if (x == 1.0) { row[static_cast<std::size_t>(n)] = 1.0; return row; }
    int k0 = static_cast<int>((n + 1) * x);
    if (k0 > n) k0 = n;
    row[static_cast<std::size_t>(k0)] = 1.0;
    const double odds = x / (1.0 - x);
    for (int k = k0; k < n; ++k) {
        // p_{n,k+1}/p_{n,k} = ((n-k)/(k+1)) * x/(1-x)
        row[static_cast<std::size_t>(k) + 1] =
            row[static_cast<std::size_t>(k)] * (static_cast<double>(n - k) / (k + 1)) * odds;
    }
    for (int k = k0; k > 0; --k) {
        row[static_cast<std::size_t>(k) - 1] =
            row[static_cast<std::size_t>(k)] * (static_cast<double>(k) / (n - k + 1)) / odds;
    }
    const double total = detail::kahan_sum(row);
    for (double& v : row) v /= total;
    return row;
}

// Direct O(n) evaluation through the normalized basis row (default backend).
inline double eval(const BernsteinPoly& poly, double x) {
    if (poly.coeffs.size() != static_cast<std::size_t>(poly.degree) + 1) {
        throw std::invalid_argument("coefficient count does not match degree");
    }
    const std::vector<double> row = basis_row(poly.degree, x);
    double s = 0.0, c = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
        double y = poly.coeffs[k] * row[k] - c;
        double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

// O(n^2) de Casteljau backend, used as the evaluation oracle in tests.
inline double eval_decasteljau(const BernsteinPoly& poly, double x) {
    detail::check_x(x);
    if (poly.coeffs.size() != static_cast<std::size_t>(poly.degree) + 1) {
        throw std::invalid_argument("coefficient count does not match degree");
    }
    std::vector<double> b = poly.coeffs;
    for (std::size_t pass = 1; pass < b.size(); ++pass) {
        for (std::size_t k = 0; k + pass < b.size(); ++k) {
            b[k] = (1.0 - x) * b[k] + x * b[k + 1];
        }
    }
    return b.empty() ? 0.0 : b[0];
}

// (D~^r p_{n,.}(x))_k for k = 0..n, where (D~u)_k = u_k - u_{k+1} and the
// sequence is padded with the p_{n,k} = 0, k > n convention.
inline DiffSequence basis_diff(int n, double x, int r) {
    if (r < 0) throw std::domain_error("negative difference order");
    std::vector<double> v = basis_row(n, x);
    v.resize(v.size() + static_cast<std::size_t>(r), 0.0);
    for (int pass = 0; pass < r; ++pass) {
        for (std::size_t k = 0; k + 1 < v.size(); ++k) v[k] = v[k] - v[k + 1];
        v.pop_back();  // last entry is now stale; support shrinks by one pad slot
    }
    v.resize(static_cast<std::size_t>(n) + 1);
    return DiffSequence{r, std::move(v)};
}

// V_{n,r}(x) = sum_k |(D~^r p)_k|.
inline double variation(int n, double x, int r) {
    const DiffSequence d = basis_diff(n, x, r);
    double s = 0.0;
    for (double v : d.values) s += std::abs(v);
    return s;
}

// T_{n,s}(x) = sum_k (k - nx)^s p_{n,k}(x).
inline double moment(int n, double x, int s) {
    if (s < 0) throw std::domain_error("negative moment order");
    const std::vector<double> row = basis_row(n, x);
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
        const double term = std::pow(static_cast<double>(k) - n * x, s) * row[k];
        double y = term - comp;
        double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    return sum;
}

// Y_{n,r,s}(x) = sum_k |k - nx|^s |(D~^r p)_k|.
inline double abs_moment(int n, double x, int r, int s) {
    if (s < 0) throw std::domain_error("negative moment order");
    const DiffSequence d = basis_diff(n, x, r);
    double sum = 0.0;
    for (std::size_t k = 0; k < d.values.size(); ++k) {
        sum += std::pow(std::abs(static_cast<double>(k) - n * x), s) * std::abs(d.values[k]);
    }
    return sum;
}

struct BasisConversion {
    BernsteinPoly poly;
    bool exact = false;             // true when the rational path was used
    bool condition_warning = false; // n > 64: transform is ill-conditioned
    double log2_condition = 0.0;    // log2 of the infinity-norm condition estimate
};

// Change of basis sum a_j x^j -> Bernstein coefficients
// b_k = sum_{j<=k} (C(k,j)/C(n,j)) a_j. Exact rationals for n <= 20.
inline BasisConversion power_to_bernstein(const std::vector<double>& power_coeffs, int n) {
    detail::check_degree(n);
    if (power_coeffs.size() > static_cast<std::size_t>(n) + 1) {
        for (std::size_t j = static_cast<std::size_t>(n) + 1; j < power_coeffs.size(); ++j) {
            if (power_coeffs[j] != 0.0) {
                throw std::invalid_argument("requested degree below polynomial degree");
            }
        }
    }
    BasisConversion out;
    out.poly.degree = n;
    out.poly.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    const std::size_t m = std::min(power_coeffs.size(), static_cast<std::size_t>(n) + 1);
    if (n <= 20) {
        out.exact = true;
        for (int k = 0; k <= n; ++k) {
            exact::Rat b = 0;
            for (std::size_t j = 0; j < m && j <= static_cast<std::size_t>(k); ++j) {
                if (power_coeffs[j] == 0.0) continue;
                b += exact::to_rational(power_coeffs[j]) *
                     exact::Rat(exact::binom(k, static_cast<int>(j)),
                                exact::binom(n, static_cast<int>(j)));
            }
            out.poly.coeffs[static_cast<std::size_t>(k)] = b.convert_to<double>();
        }
    } else {
        for (int k = 0; k <= n; ++k) {
            double ratio = 1.0;  // C(k,j)/C(n,j), updated over j
            double b = 0.0;
            for (std::size_t j = 0; j < m && j <= static_cast<std::size_t>(k); ++j) {
                if (power_coeffs[j] != 0.0) b += power_coeffs[j] * ratio;
                ratio *= static_cast<double>(k - static_cast<int>(j)) /
                         static_cast<double>(n - static_cast<int>(j));
            }
            out.poly.coeffs[static_cast<std::size_t>(k)] = b;
        }
    }
    out.condition_warning = n > 64;
    // ||L||_inf = n+1 and ||L^{-1}||_inf = max_j C(n,j) 2^j for the inverse map.
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double lg2 = (std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                            std::lgamma(n - j + 1.0)) / std::numbers::ln2_v<double> + j;
        if (lg2 > worst) worst = lg2;
    }
    out.log2_condition = std::log2(n + 1.0) + worst;
    return out;
}

}  // namespace bernquant
