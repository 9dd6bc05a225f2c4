// Error measurement: pointwise reports, L^p norms, theoretical envelopes,
// and log-log rate fitting.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bernquant/bernstein.hpp"
#include "bernquant/functions.hpp"

namespace bernquant {

struct ErrorReport {
    int n = 0;
    std::vector<double> grid;
    std::vector<double> f_values;
    std::vector<double> q_values;
    std::vector<double> pointwise_error;
    std::vector<double> envelope_values;
    std::map<std::string, double> lp_norms;  // keys "L1", "L2", "Linf"
    double sup_on_interval = 0.0;
    double interval_a = 0.2;
    double interval_b = 0.8;
    double slope = std::numeric_limits<double>::quiet_NaN();  // set by sweeps
};

inline ErrorReport pointwise_error(const FunctionSpec& f, const BernsteinPoly& Q, int grid_size) {
    if (grid_size < 2) throw std::domain_error("grid_size must be >= 2");
    ErrorReport rep;
    rep.n = Q.degree;
    rep.grid.resize(static_cast<std::size_t>(grid_size));
    rep.f_values.resize(rep.grid.size());
    rep.q_values.resize(rep.grid.size());
    rep.pointwise_error.resize(rep.grid.size());
    for (int i = 0; i < grid_size; ++i) {
        const double x = static_cast<double>(i) / (grid_size - 1);
        rep.grid[static_cast<std::size_t>(i)] = x;
        rep.f_values[static_cast<std::size_t>(i)] = f(x);
        rep.q_values[static_cast<std::size_t>(i)] = eval(Q, x);
        rep.pointwise_error[static_cast<std::size_t>(i)] =
            std::abs(rep.f_values[static_cast<std::size_t>(i)] - rep.q_values[static_cast<std::size_t>(i)]);
    }
    return rep;
}

// Composite Simpson L^p norm of |e| over [0,1] on at least 2001 points
// (count forced odd); p = inf returns the max.
inline double lp_norm(const std::function<double(double)>& abs_error, double p, int points = 2001) {
    if (p < 1.0) throw std::domain_error("p must be in [1,inf]");
    if (points < 2001) points = 2001;
    if (points % 2 == 0) ++points;
    if (std::isinf(p)) {
        double worst = 0.0;
        for (int i = 0; i < points; ++i) {
            const double x = static_cast<double>(i) / (points - 1);
            worst = std::max(worst, std::abs(abs_error(x)));
        }
        return worst;
    }
    const double h = 1.0 / (points - 1);
    double s = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = static_cast<double>(i) / (points - 1);
        const double v = std::pow(std::abs(abs_error(x)), p);
        const double weight = (i == 0 || i == points - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += weight * v;
    }
    return std::pow(s * h / 3.0, 1.0 / p);
}

inline double lp_norm(const std::vector<double>& samples, double p) {
    // Samples are read as values on the uniform [0,1] grid they came from.
    if (samples.size() < 3 || samples.size() % 2 == 0) {
        if (std::isinf(p)) {
            double worst = 0.0;
            for (double v : samples) worst = std::max(worst, std::abs(v));
            return worst;
        }
        throw std::domain_error("sample-based L^p needs an odd count >= 3");
    }
    if (std::isinf(p)) {
        double worst = 0.0;
        for (double v : samples) worst = std::max(worst, std::abs(v));
        return worst;
    }
    const double h = 1.0 / (static_cast<double>(samples.size()) - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = std::pow(std::abs(samples[i]), p);
        const double weight = (i == 0 || i + 1 == samples.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += weight * v;
    }
    return std::pow(s * h / 3.0, 1.0 / p);
}

enum class EnvelopeRegime { First, Second, General };

// Unit-constant theoretical error envelopes; shape comparison only.
inline double envelope(int n, int r, double x, EnvelopeRegime regime) {
    const double X = x * (1.0 - x);
    switch (regime) {
        case EnvelopeRegime::First: return 1.0 / (1.0 + std::sqrt(n * X));
        case EnvelopeRegime::Second: return 1.0 / (1.0 + n * X);
        case EnvelopeRegime::General:
            if (X == 0.0) return std::numeric_limits<double>::infinity();
            return std::pow(n, -0.5 * r) * std::pow(X, -static_cast<double>(r));
    }
    throw std::logic_error("unreachable");
}

inline EnvelopeRegime regime_for_order(int r) {
    if (r == 1) return EnvelopeRegime::First;
    if (r == 2) return EnvelopeRegime::Second;
    return EnvelopeRegime::General;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline RateFit rate_fit(const std::vector<double>& ns, const std::vector<double>& errors) {
    if (ns.size() != errors.size()) throw std::invalid_argument("length mismatch");
    if (ns.size() < 4) throw std::invalid_argument("rate_fit needs at least 4 points");
    const std::size_t m = ns.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(ns[i] > 0.0) || !(errors[i] > 0.0)) {
            throw std::invalid_argument("rate_fit needs positive degrees and errors");
        }
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

// Max of |callable| over [a,b] on a uniform grid including endpoints.
inline double sup_on_interval(const std::function<double(double)>& fn, double a, double b,
                              int points = 601) {
    if (!(a < b)) throw std::domain_error("empty interval");
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / (points - 1);
        worst = std::max(worst, std::abs(fn(x)));
    }
    return worst;
}

}  // namespace bernquant
