// Stage-one approximants: Bernstein operator on the grid, Kantorovich
// coefficients, iterated combinations U_{n,r}, and near-best proxies.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bernquant/bernstein.hpp"
#include "bernquant/functions.hpp"

namespace bernquant {

struct GridFunction {
    int n = 0;
    std::vector<double> values;  // value at k/n
};

inline GridFunction sample_grid(const FunctionSpec& f, int n) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    GridFunction g;
    g.n = n;
    g.values.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        g.values[static_cast<std::size_t>(k)] = f(static_cast<double>(k) / n);
    }
    return g;
}

// Discretized Bernstein operator: entry [k][i] = p_{n,i}(k/n) (row-stochastic).
// Applying it to grid values of g yields B_n(g) on the same grid.
struct OperatorMatrix {
    int n = 0;
    std::vector<double> a;  // row-major (n+1) x (n+1)

    std::vector<double> apply(const std::vector<double>& v) const {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        if (v.size() != m) throw std::invalid_argument("grid length mismatch");
        std::vector<double> out(m, 0.0);
        for (std::size_t row = 0; row < m; ++row) {
            const double* base = a.data() + row * m;
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += base[i] * v[i];
            out[row] = s;
        }
        return out;
    }
};

inline OperatorMatrix operator_matrix(int n) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    OperatorMatrix m;
    m.n = n;
    const std::size_t size = static_cast<std::size_t>(n) + 1;
    m.a.resize(size * size);
    for (std::size_t k = 0; k < size; ++k) {
        const std::vector<double> row = basis_row(n, static_cast<double>(k) / n);
        std::copy(row.begin(), row.end(), m.a.begin() + static_cast<std::ptrdiff_t>(k * size));
    }
    return m;
}

struct PrCoeffs {
    std::vector<double> c;  // c_j, j = 0..r-2
    double C_r = 0.0;       // sum |c_j|
};

// Coefficients of the quotient (1 - (1-x)^r - x^r) / (x(1-x)) in the mixed
// form sum_j c_j x^j: c_j = 1 + (-1)^j C(r-1, j+1).
inline PrCoeffs pr_coeffs(int r) {
    if (r < 2) throw std::domain_error("pr_coeffs needs r >= 2");
    PrCoeffs out;
    out.c.resize(static_cast<std::size_t>(r) - 1);
    for (int j = 0; j <= r - 2; ++j) {
        const double sign = (j % 2) ? -1.0 : 1.0;
        out.c[static_cast<std::size_t>(j)] =
            1.0 + sign * exact::binom(r - 1, j + 1).convert_to<double>();
        out.C_r += std::abs(out.c[static_cast<std::size_t>(j)]);
    }
    return out;
}

// Grid values of f_{n,r} = B_n^{r-1} f + P_{r-2}(B_n)(I - B_n) f, so that
// U_{n,r}(f) = B_n(f_{n,r}) is the Bernstein poly with these coefficients.
inline GridFunction iterated_U_coeffs(const FunctionSpec& f, int n, int r) {
    if (r < 1) throw std::domain_error("order must be >= 1");
    GridFunction g = sample_grid(f, n);
    if (r == 1) return g;
    const OperatorMatrix m = operator_matrix(n);
    const PrCoeffs pr = pr_coeffs(r);
    std::vector<double> bf = m.apply(g.values);
    std::vector<double> resid(g.values.size());
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = g.values[i] - bf[i];
    std::vector<double> acc(g.values.size(), 0.0);
    std::vector<double> term = resid;
    for (int j = 0; j <= r - 2; ++j) {
        if (j > 0) term = m.apply(term);
        const double cj = pr.c[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cj * term[i];
    }
    std::vector<double> pow = g.values;
    for (int i = 0; i < r - 1; ++i) pow = m.apply(pow);
    GridFunction out;
    out.n = n;
    out.values.resize(g.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = pow[i] + acc[i];
    return out;
}

struct AdmissibleCheck {
    bool ok = false;
    double max_abs = 0.0;
};

inline AdmissibleCheck check_onebit_admissible(const GridFunction& coeffs, double mu) {
    AdmissibleCheck out;
    for (double v : coeffs.values) out.max_abs = std::max(out.max_abs, std::abs(v));
    out.ok = out.max_abs <= mu;
    return out;
}

// values[k] = (n+1) * integral of f over [k/(n+1), (k+1)/(n+1)].
inline GridFunction kantorovich_coeffs(const FunctionSpec& f, int n) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    using boost::math::quadrature::gauss_kronrod;
    GridFunction g;
    g.n = n;
    g.values.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double a = static_cast<double>(k) / (n + 1);
        const double b = static_cast<double>(k + 1) / (n + 1);
        double err = 0.0;
        const double integral = gauss_kronrod<double, 15>::integrate(
            [&f](double x) { return f(x); }, a, b, 12, 1e-12, &err);
        if (!(err < 1e-10)) throw std::runtime_error("kantorovich quadrature did not converge");
        g.values[static_cast<std::size_t>(k)] = (n + 1.0) * integral;
    }
    return g;
}

struct ProxyResult {
    BernsteinPoly poly;
    std::string kind;                 // "chebyshev" or "legendre_l2"
    double sup_error_estimate = 0.0;  // filled for the chebyshev path
};

namespace detail {

// Coefficients below ~DCT noise floor get chopped before the power-basis
// conversion; surviving noise at index j would be amplified by ~5.83^j.
constexpr double kProxyChop = 3e-13;

inline std::vector<double> chebyshev_power_coeffs(const FunctionSpec& f, int n) {
    const int m = n + 1;
    std::vector<double> theta(static_cast<std::size_t>(m)), fv(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        theta[static_cast<std::size_t>(i)] = (2.0 * i + 1.0) * std::numbers::pi / (2.0 * m);
        fv[static_cast<std::size_t>(i)] = f((std::cos(theta[static_cast<std::size_t>(i)]) + 1.0) / 2.0);
    }
    std::vector<double> a(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            s += fv[static_cast<std::size_t>(i)] * std::cos(j * theta[static_cast<std::size_t>(i)]);
        }
        a[static_cast<std::size_t>(j)] = 2.0 / m * s;
    }
    a[0] /= 2.0;
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    int deg = 0;
    for (int j = 0; j < m; ++j) {
        if (std::abs(a[static_cast<std::size_t>(j)]) < kProxyChop * amax) {
            a[static_cast<std::size_t>(j)] = 0.0;
        } else {
            deg = j;
        }
    }
    // Accumulate a_j T_j(2x-1) in the power basis via the shifted recurrence
    // T_{j+1} = (4x-2) T_j - T_{j-1}.
    std::vector<double> p(static_cast<std::size_t>(deg) + 1, 0.0);
    std::vector<double> tprev(p.size(), 0.0), tcur(p.size(), 0.0);
    tprev[0] = 1.0;
    p[0] = a[0];
    if (deg >= 1) {
        tcur[0] = -1.0;
        tcur[1] = 2.0;
        if (a[1] != 0.0) for (std::size_t i = 0; i < p.size(); ++i) p[i] += a[1] * tcur[i];
        for (int j = 2; j <= deg; ++j) {
            std::vector<double> tnext(p.size(), 0.0);
            for (std::size_t i = 0; i + 1 < p.size(); ++i) tnext[i + 1] = 4.0 * tcur[i];
            for (std::size_t i = 0; i < p.size(); ++i) tnext[i] -= 2.0 * tcur[i] + tprev[i];
            tprev.swap(tcur);
            tcur.swap(tnext);
            if (a[static_cast<std::size_t>(j)] != 0.0) {
                for (std::size_t i = 0; i < p.size(); ++i) p[i] += a[static_cast<std::size_t>(j)] * tcur[i];
            }
        }
    }
    return p;
}

inline std::vector<double> legendre_power_coeffs(const FunctionSpec& f, int n) {
    using boost::math::quadrature::gauss_kronrod;
    // Shifted Legendre P*_j on [0,1]: (j+1) P*_{j+1} = (2j+1)(2x-1) P*_j - j P*_{j-1}.
    std::vector<std::vector<double>> basis;
    basis.push_back({1.0});
    if (n >= 1) basis.push_back({-1.0, 2.0});
    for (int j = 1; j < n; ++j) {
        const auto& pj = basis[static_cast<std::size_t>(j)];
        const auto& pm = basis[static_cast<std::size_t>(j) - 1];
        std::vector<double> next(static_cast<std::size_t>(j) + 2, 0.0);
        for (std::size_t i = 0; i < pj.size(); ++i) {
            next[i + 1] += (2.0 * j + 1.0) * 2.0 * pj[i];
            next[i] -= (2.0 * j + 1.0) * pj[i];
        }
        for (std::size_t i = 0; i < pm.size(); ++i) next[i] -= j * pm[i];
        for (double& v : next) v /= (j + 1.0);
        basis.push_back(std::move(next));
    }
    std::vector<double> chat(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        const auto& pj = basis[static_cast<std::size_t>(j)];
        auto integrand = [&](double x) {
            double v = 0.0;
            for (std::size_t i = pj.size(); i-- > 0;) v = v * x + pj[i];
            return f(x) * v;
        };
        double err = 0.0;
        const double integral = gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 12, 1e-12, &err);
        chat[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) * integral;
    }
    double cmax = 0.0;
    for (double v : chat) cmax = std::max(cmax, std::abs(v));
    std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        if (std::abs(chat[static_cast<std::size_t>(j)]) < kProxyChop * cmax) continue;
        const auto& pj = basis[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < pj.size(); ++i) p[i] += chat[static_cast<std::size_t>(j)] * pj[i];
    }
    return p;
}

}  // namespace detail

// Near-best degree-n approximant: Chebyshev interpolation for p = inf,
// shifted-Legendre least squares for p = 2 (reused for other finite p).
inline ProxyResult near_best_proxy(const FunctionSpec& f, int n, double p) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    if (n > 128) throw std::domain_error("near_best_proxy: power-basis conversion unreliable beyond n = 128");
    ProxyResult out;
    std::vector<double> power;
    if (std::isinf(p)) {
        out.kind = "chebyshev";
        power = detail::chebyshev_power_coeffs(f, n);
    } else {
        out.kind = "legendre_l2";
        power = detail::legendre_power_coeffs(f, n);
    }
    out.poly = power_to_bernstein(power, n).poly;
    if (std::isinf(p)) {
        double worst = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double x = static_cast<double>(i) / 500.0;
            worst = std::max(worst, std::abs(f(x) - eval(out.poly, x)));
        }
        out.sup_error_estimate = worst;
    }
    return out;
}

}  // namespace bernquant
