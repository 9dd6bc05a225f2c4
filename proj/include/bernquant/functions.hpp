// Registry of named test functions with optional exact norm data.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bernquant {

struct FunctionSpec {
    std::string id;
    std::vector<double> params;
    std::function<double(double)> f;
    // Keys used: sup_norm, lip_seminorm, c2_norm, cs_lip_norm. Exact values
    // or safe upper bounds, supplied per registry entry.
    std::map<std::string, double> known_norms;

    double operator()(double x) const { return f(x); }
};

// Supported ids:
//   const c              -> c
//   linear a b           -> a + b x
//   abs A c              -> A |x - c|
//   sin2pi A             -> A sin(2 pi x)
//   exp                  -> e^x
//   poly a0 a1 ... ad    -> sum a_j x^j
inline FunctionSpec make_function(const std::string& id, const std::vector<double>& params = {}) {
    using std::numbers::pi;
    FunctionSpec spec;
    spec.id = id;
    spec.params = params;
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            throw std::invalid_argument("function '" + id + "' expects " +
                                        std::to_string(count) + " parameter(s)");
        }
    };
    if (id == "const") {
        need(1);
        const double c = params[0];
        spec.f = [c](double) { return c; };
        spec.known_norms = {{"sup_norm", std::abs(c)}, {"lip_seminorm", 0.0}, {"c2_norm", 0.0}};
    } else if (id == "linear") {
        need(2);
        const double a = params[0], b = params[1];
        spec.f = [a, b](double x) { return a + b * x; };
        spec.known_norms = {{"sup_norm", std::max(std::abs(a), std::abs(a + b))},
                            {"lip_seminorm", std::abs(b)},
                            {"c2_norm", 0.0}};
    } else if (id == "abs") {
        need(2);
        const double amp = params[0], c = params[1];
        spec.f = [amp, c](double x) { return amp * std::abs(x - c); };
        spec.known_norms = {{"sup_norm", std::abs(amp) * std::max(c, 1.0 - c)},
                            {"lip_seminorm", std::abs(amp)}};
    } else if (id == "sin2pi") {
        need(1);
        const double amp = params[0];
        spec.f = [amp](double x) { return amp * std::sin(2.0 * pi * x); };
        spec.known_norms = {{"sup_norm", std::abs(amp)},
                            {"lip_seminorm", std::abs(amp) * 2.0 * pi},
                            {"c2_norm", std::abs(amp) * 4.0 * pi * pi},
                            {"cs_lip_norm", std::abs(amp) * 16.0 * pi * pi * pi * pi}};
    } else if (id == "exp") {
        need(0);
        spec.f = [](double x) { return std::exp(x); };
        const double e = std::exp(1.0);
        spec.known_norms = {{"sup_norm", e}, {"lip_seminorm", e}, {"c2_norm", e}, {"cs_lip_norm", e}};
    } else if (id == "poly") {
        if (params.empty()) throw std::invalid_argument("poly needs at least one coefficient");
        const std::vector<double> a = params;
        spec.f = [a](double x) {
            double v = 0.0;
            for (std::size_t j = a.size(); j-- > 0;) v = v * x + a[j];
            return v;
        };
        double sup = 0.0, dsup = 0.0, d2sup = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            sup += std::abs(a[j]);
            if (j >= 1) dsup += j * std::abs(a[j]);
            if (j >= 2) d2sup += j * (j - 1.0) * std::abs(a[j]);
        }
        spec.known_norms = {{"sup_norm", sup}, {"lip_seminorm", dsup}, {"c2_norm", d2sup}};
    } else {
        throw std::invalid_argument("unknown function id '" + id + "'");
    }
    return spec;
}

}  // namespace bernquant
