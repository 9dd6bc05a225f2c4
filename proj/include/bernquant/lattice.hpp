// Coefficient-wise rounding to the integer lattice and the alpha-interpolated
// lattice family, in exact big-integer arithmetic.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bernquant/bernstein.hpp"
#include "bernquant/exact.hpp"
#include "bernquant/functions.hpp"

namespace bernquant {

struct DegreeTooLarge : std::domain_error {
    using std::domain_error::domain_error;
};

// Runtime sanity cap; exact integers have no representability limit.
inline constexpr int kLatticeDegreeCap = 4096;

struct LatticeParams {
    double alpha = 0.0;
    std::vector<exact::Int> delta;  // Delta_{n,k} = floor(C(n,k)^alpha) >= 1
};

inline LatticeParams lattice_params(int n, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("alpha outside [0,1]");
    if (n < 1) throw std::domain_error("degree must be >= 1");
    if (n > kLatticeDegreeCap) throw DegreeTooLarge("lattice degree cap exceeded");
    LatticeParams p;
    p.alpha = alpha;
    p.delta.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        p.delta[static_cast<std::size_t>(k)] = exact::floor_pow(exact::binom(n, k), alpha);
    }
    return p;
}

// Integer coefficients [f(k/n) C(n,k)] of the plain basis x^k (1-x)^{n-k}.
struct StarRounding {
    int n = 0;
    std::vector<exact::Int> m;
};

inline StarRounding round_star(const FunctionSpec& f, int n) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    if (n > kLatticeDegreeCap) throw DegreeTooLarge("lattice degree cap exceeded");
    StarRounding out;
    out.n = n;
    out.m.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const exact::Rat exact_coeff =
            exact::to_rational(f(static_cast<double>(k) / n)) * exact::binom(n, k);
        out.m[static_cast<std::size_t>(k)] = exact::round_half_even(exact_coeff);
    }
    return out;
}

// Lattice rounding at level alpha: m_k = [f(k/n) C(n,k) / Delta_{n,k}], the
// quantized polynomial being sum m_k Delta_{n,k} x^k (1-x)^{n-k}.
struct AlphaRounding {
    int n = 0;
    double alpha = 0.0;
    std::vector<exact::Int> delta;
    std::vector<exact::Int> m;
};

inline AlphaRounding round_alpha(const FunctionSpec& f, int n, double alpha) {
    const LatticeParams params = lattice_params(n, alpha);
    AlphaRounding out;
    out.n = n;
    out.alpha = alpha;
    out.delta = params.delta;
    out.m.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const exact::Rat scaled =
            exact::to_rational(f(static_cast<double>(k) / n)) *
            exact::Rat(exact::binom(n, k), out.delta[static_cast<std::size_t>(k)]);
        out.m[static_cast<std::size_t>(k)] = exact::round_half_even(scaled);
    }
    return out;
}

namespace detail {

// sum_k c_k x^k (1-x)^{n-k} with big-integer c_k, evaluated in log2 space per
// term (the c_k near k = n/2 overflow doubles long before n = 4096).
inline double eval_plain_lattice(const std::vector<exact::Int>& c, int n, double x) {
    check_x(x);
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        const exact::Int& ck = c[static_cast<std::size_t>(k)];
        if (ck == 0) continue;
        const int sign = ck < 0 ? -1 : 1;
        const double lg2 = exact::log2_int(sign > 0 ? ck : exact::Int(-ck));
        double lx;
        if (x == 0.0) {
            if (k != 0) continue;
            lx = 0.0;
        } else if (x == 1.0) {
            if (k != n) continue;
            lx = 0.0;
        } else {
            lx = k * std::log2(x) + (n - k) * std::log2(1.0 - x);
        }
        s += sign * std::exp2(lg2 + lx);
    }
    return s;
}

}  // namespace detail

inline double eval_star(const StarRounding& r, double x) {
    return detail::eval_plain_lattice(r.m, r.n, x);
}

inline double eval_alpha(const AlphaRounding& r, double x) {
    std::vector<exact::Int> c(r.m.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = r.m[k] * r.delta[k];
    return detail::eval_plain_lattice(c, r.n, x);
}

// Signs and log2 magnitudes of the plain-basis coefficients c_k = m_k Delta_k,
// precomputed once so grid sweeps avoid re-deriving big integers per point.
struct PlainCoeffs {
    int n = 0;
    std::vector<int> sign;       // 0 marks an absent term
    std::vector<double> log2_abs;
};

inline PlainCoeffs plain_coeffs(const AlphaRounding& r) {
    PlainCoeffs pc;
    pc.n = r.n;
    pc.sign.resize(r.m.size(), 0);
    pc.log2_abs.resize(r.m.size(), 0.0);
    for (std::size_t k = 0; k < r.m.size(); ++k) {
        exact::Int c = r.m[k] * r.delta[k];
        if (c == 0) continue;
        pc.sign[k] = c < 0 ? -1 : 1;
        pc.log2_abs[k] = exact::log2_int(c < 0 ? exact::Int(-c) : c);
    }
    return pc;
}

inline double eval_plain(const PlainCoeffs& pc, double x) {
    detail::check_x(x);
    double s = 0.0;
    for (int k = 0; k <= pc.n; ++k) {
        if (pc.sign[static_cast<std::size_t>(k)] == 0) continue;
        double lx;
        if (x == 0.0) {
            if (k != 0) continue;
            lx = 0.0;
        } else if (x == 1.0) {
            if (k != pc.n) continue;
            lx = 0.0;
        } else {
            lx = k * std::log2(x) + (pc.n - k) * std::log2(1.0 - x);
        }
        s += pc.sign[static_cast<std::size_t>(k)] *
             std::exp2(pc.log2_abs[static_cast<std::size_t>(k)] + lx);
    }
    return s;
}

struct LatticeStats {
    double log2_M_n = 0.0;  // sum_k log2 C(n,k)
    double mu_n = 0.0;      // log2_M_n / (n+1)
};

inline LatticeStats lattice_stats(int n) {
    if (n < 1) throw std::domain_error("degree must be >= 1");
    LatticeStats st;
    std::vector<double> lgam(static_cast<std::size_t>(n) + 2);
    for (int i = 0; i <= n + 1; ++i) lgam[static_cast<std::size_t>(i)] = std::lgamma(i + 1.0);
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
        s += lgam[static_cast<std::size_t>(n)] - lgam[static_cast<std::size_t>(k)] -
             lgam[static_cast<std::size_t>(n - k)];
    }
    st.log2_M_n = s / std::numbers::ln2_v<double>;
    st.mu_n = st.log2_M_n / (n + 1.0);
    return st;
}

}  // namespace bernquant
