// rth-order sigma-delta quantization over Z and {+-1}: greedy rule, the
// provably stable filtered one-bit family, difference-equation bookkeeping,
// and the state monitor.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bernquant/bernstein.hpp"
#include "bernquant/exact.hpp"

namespace bernquant {

enum class AlphabetKind { Integers, PlusMinusOne };

struct Alphabet {
    AlphabetKind kind = AlphabetKind::Integers;
};

// Greedy: round the pre-state to the nearest alphabet element.
// StableOneBit: the greedy sign rule on {+-1} with the declared input bound
// mu enforced and the u_cap monitor armed; empirically stable for r <= 2,
// known to blow up for r >= 3 (the monitor is the contract, not a proof).
// FilteredOneBit: sparse-FIR feedback rule (Daubechies-DeVore style) with a
// proven state bound, provided as the plug-in for higher orders.
enum class QuantRule { Greedy, StableOneBit, FilteredOneBit };

struct QuantizerConfig {
    int order = 1;             // r >= 1
    Alphabet alphabet;
    QuantRule rule = QuantRule::Greedy;
    double mu = 1.0;           // declared input bound, used by stability assertions
    double u_cap = 1e6;        // abort threshold for |u_k|
};

struct QuantizationResult {
    std::vector<double> q;
    std::vector<double> u;     // Delta^r u = y - q with u_k = 0 for k < 0
    double u_max = 0.0;
    int order = 1;
    Alphabet alphabet;
};

struct StabilityViolation : std::runtime_error {
    std::size_t step;
    double value;
    StabilityViolation(std::size_t k, double v)
        : std::runtime_error("sigma-delta state exceeded u_cap at step " + std::to_string(k) +
                             " (|u| = " + std::to_string(v) + ")"),
          step(k), value(v) {}
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double round_to_alphabet(double v, const Alphabet& alphabet) {
    if (alphabet.kind == AlphabetKind::PlusMinusOne) {
        return v >= 0.0 ? 1.0 : -1.0;  // tie at 0 -> +1
    }
    return std::nearbyint(v);          // ties to even under FE_TONEAREST
}

// Sparse FIR feedback filter for the stable one-bit rule: taps h_{m_j} on r
// integer nodes with sum h = 1 and vanishing moments up to r-1, so that
// (1-w)^r divides 1 - H(w). If ||h||_1 <= 2 - mu the internal state v stays
// in [-1,1] for inputs bounded by mu, and u = g * v with
// g = (1 - H)/(1-w)^r gives |u| <= ||g||_1.
struct OneBitFilter {
    std::vector<int> nodes;
    std::vector<double> taps;
    std::vector<double> g;  // quotient coefficients; u is evaluated as g * v
    double l1_h = 0.0;
    double l1_g = 0.0;    // provable bound on |u|
    double mu_cap = 0.0;  // largest input bound this filter is proven for
};

namespace detail {

inline OneBitFilter build_filter(const std::vector<int>& nodes, int r) {
    using exact::Rat;
    const int R = static_cast<int>(nodes.size());
    std::vector<Rat> h(static_cast<std::size_t>(R));
    for (int j = 0; j < R; ++j) {
        Rat v = 1;
        for (int i = 0; i < R; ++i) {
            if (i != j) v *= exact::make_rat(nodes[static_cast<std::size_t>(i)],
                                             nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)]);
        }
        h[static_cast<std::size_t>(j)] = v;
    }
    // num(w) = 1 - H(w); divide by (1-w)^r exactly, remainder must vanish.
    const int N = nodes.back();
    std::vector<Rat> num(static_cast<std::size_t>(N) + 1, Rat(0));
    num[0] = 1;
    for (int j = 0; j < R; ++j) num[static_cast<std::size_t>(nodes[static_cast<std::size_t>(j)])] -= h[static_cast<std::size_t>(j)];
    std::vector<Rat> den(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) {
        den[static_cast<std::size_t>(j)] = Rat(((j % 2) ? -1 : 1) * exact::binom(r, j).convert_to<long long>());
    }
    std::vector<Rat> g(static_cast<std::size_t>(N - r) + 1, Rat(0));
    std::vector<Rat> rem = num;
    for (int i = 0; i + r <= N; ++i) {
        g[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(i)] / den[0];
        for (int j = 0; j <= r; ++j) {
            rem[static_cast<std::size_t>(i + j)] -= g[static_cast<std::size_t>(i)] * den[static_cast<std::size_t>(j)];
        }
    }
    for (const Rat& x : rem) {
        if (x != 0) throw std::logic_error("filter moment conditions violated");
    }
    OneBitFilter out;
    out.nodes = nodes;
    Rat l1h = 0, l1g = 0;
    for (const Rat& x : h) l1h += boost::multiprecision::abs(x);
    for (const Rat& x : g) l1g += boost::multiprecision::abs(x);
    out.taps.reserve(h.size());
    for (const Rat& x : h) out.taps.push_back(x.convert_to<double>());
    out.g.reserve(g.size());
    for (const Rat& x : g) out.g.push_back(x.convert_to<double>());
    out.l1_h = l1h.convert_to<double>();
    out.l1_g = l1g.convert_to<double>();
    out.mu_cap = (Rat(2) - l1h).convert_to<double>();
    return out;
}

// Node tables per order, smallest support first. Designed by minimizing
// ||h||_1 at fixed support; mu_cap = 2 - ||h||_1 covers 0.5 / 0.8 / 0.9 tiers.
inline const std::vector<std::vector<int>>& filter_nodes(int r) {
    static const std::vector<std::vector<int>> r1{{1}};
    static const std::vector<std::vector<int>> r2{{1, 5}, {1, 11}, {1, 21}};
    static const std::vector<std::vector<int>> r3{{1, 10, 18}, {1, 22, 42}, {1, 49, 96}};
    static const std::vector<std::vector<int>> r4{{1, 11, 30, 40}, {1, 25, 72, 96}, {1, 49, 144, 192}};
    switch (r) {
        case 1: return r1;
        case 2: return r2;
        case 3: return r3;
        case 4: return r4;
        default: throw PreconditionError("no stable one-bit filter table for order " + std::to_string(r));
    }
}

}  // namespace detail

// Smallest-support filter proven stable for inputs bounded by mu.
inline OneBitFilter stable_filter_for(int order, double mu) {
    const auto& table = detail::filter_nodes(order);
    for (const auto& nodes : table) {
        OneBitFilter f = detail::build_filter(nodes, order);
        if (f.mu_cap >= mu - 1e-12) return f;
    }
    OneBitFilter last = detail::build_filter(table.back(), order);
    throw PreconditionError("no stable one-bit filter for order " + std::to_string(order) +
                            " at mu = " + std::to_string(mu) +
                            " (largest supported: " + std::to_string(last.mu_cap) + ")");
}

inline QuantizationResult quantize(const std::vector<double>& y, const QuantizerConfig& config) {
    if (config.order < 1) throw std::invalid_argument("quantizer order must be >= 1");
    if (config.rule != QuantRule::Greedy && config.alphabet.kind != AlphabetKind::PlusMinusOne) {
        throw std::invalid_argument("one-bit rules require the {+-1} alphabet");
    }
    const int r = config.order;
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    if (config.rule != QuantRule::Greedy && ymax > config.mu + 1e-12) {
        throw PreconditionError("input exceeds declared bound mu");
    }
    if (config.rule == QuantRule::Greedy && config.alphabet.kind == AlphabetKind::PlusMinusOne &&
        r == 1 && ymax > 1.0 + 1e-12) {
        throw PreconditionError("greedy one-bit order 1 requires inputs in [-1,1]");
    }

    // w_j = (-1)^{j-1} C(r,j): u_k = sum_j w_j u_{k-j} + y_k - q_k.
    std::vector<double> w(static_cast<std::size_t>(r));
    for (int j = 1; j <= r; ++j) {
        w[static_cast<std::size_t>(j) - 1] =
            ((j % 2) ? 1.0 : -1.0) * exact::binom(r, j).convert_to<double>();
    }

    OneBitFilter filter;
    std::vector<double> vstate;
    const bool filtered = config.rule == QuantRule::FilteredOneBit;
    if (filtered) {
        filter = stable_filter_for(r, config.mu);
        vstate.assign(y.size(), 0.0);
    }

    QuantizationResult res;
    res.order = r;
    res.alphabet = config.alphabet;
    res.q.resize(y.size());
    res.u.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        double qk, uk;
        if (filtered) {
            double fv = y[k];
            for (std::size_t j = 0; j < filter.nodes.size(); ++j) {
                const std::size_t lag = static_cast<std::size_t>(filter.nodes[j]);
                if (lag <= k) fv += filter.taps[j] * vstate[k - lag];
            }
            qk = fv >= 0.0 ? 1.0 : -1.0;
            vstate[k] = fv - qk;
            // u = g * v evaluated directly: the recursive update of u obeys
            // the same marginally stable difference equation and its rounding
            // error random-walks past any fixed bound on megasample runs,
            // while the convolution inherits |u| <= ||g||_1 up to one
            // rounding per tap.
            uk = 0.0;
            const std::size_t span = std::min(filter.g.size(), k + 1);
            for (std::size_t i = 0; i < span; ++i) uk += filter.g[i] * vstate[k - i];
        } else {
            double wsum = 0.0;
            for (int j = 1; j <= r && static_cast<std::size_t>(j) <= k; ++j) {
                wsum += w[static_cast<std::size_t>(j) - 1] * res.u[k - static_cast<std::size_t>(j)];
            }
            qk = round_to_alphabet(wsum + y[k], config.alphabet);
            uk = wsum + y[k] - qk;
        }
        res.q[k] = qk;
        res.u[k] = uk;
        const double au = std::abs(res.u[k]);
        if (au > config.u_cap) throw StabilityViolation(k, au);
        if (au > res.u_max) res.u_max = au;
    }
    return res;
}

// max_k |(y - q)_k - (Delta^r u)_k| with zero left-padding of u.
inline double verify_difference_equation(const std::vector<double>& y, const QuantizationResult& result) {
    if (y.size() != result.q.size() || y.size() != result.u.size()) {
        throw std::invalid_argument("length mismatch");
    }
    const int r = result.order;
    double worst = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        double dru = 0.0;
        for (int j = 0; j <= r; ++j) {
            if (static_cast<std::size_t>(j) > k) break;
            const double sign = (j % 2) ? -1.0 : 1.0;
            dru += sign * exact::binom(r, j).convert_to<double>() * result.u[k - static_cast<std::size_t>(j)];
        }
        worst = std::max(worst, std::abs((y[k] - result.q[k]) - dru));
    }
    return worst;
}

// E^Q as a Bernstein-form polynomial with coefficients y - q.
inline BernsteinPoly quantization_error_poly(const std::vector<double>& y,
                                             const std::vector<double>& q, int n) {
    if (y.size() != static_cast<std::size_t>(n) + 1 || q.size() != y.size()) {
        throw std::invalid_argument("length mismatch");
    }
    BernsteinPoly p;
    p.degree = n;
    p.coeffs.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) p.coeffs[k] = y[k] - q[k];
    return p;
}

}  // namespace bernquant
