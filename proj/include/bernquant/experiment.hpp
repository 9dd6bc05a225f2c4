// Experiment pipeline shared by the CLI and the acceptance harness: stage-one
// construction, the one-bit admissibility gate, quantization, error reports,
// degree sweeps, and deterministic serialization.
#pragma once

#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bernquant/analysis.hpp"
#include "bernquant/operators.hpp"
#include "bernquant/sigma_delta.hpp"

namespace bernquant {

struct AdmissibilityError : std::runtime_error {
    double max_abs;
    AdmissibilityError(double m, double mu)
        : std::runtime_error("one-bit admissibility gate failed: max coefficient " +
                             std::to_string(m) + " exceeds mu = " + std::to_string(mu)),
          max_abs(m) {}
};

enum class StageKind { Bernstein, Kantorovich, IteratedU, Proxy };

struct StageSpec {
    StageKind kind = StageKind::Bernstein;
    int iter_order = 2;   // for iteru:R
    double proxy_p = 2.0; // for proxy:P ("inf" allowed)

    static StageSpec parse(const std::string& s) {
        StageSpec spec;
        if (s == "bernstein") {
            spec.kind = StageKind::Bernstein;
        } else if (s == "kantorovich") {
            spec.kind = StageKind::Kantorovich;
        } else if (s.rfind("iteru:", 0) == 0) {
            spec.kind = StageKind::IteratedU;
            spec.iter_order = std::stoi(s.substr(6));
            if (spec.iter_order < 1) throw std::invalid_argument("iteru order must be >= 1");
        } else if (s.rfind("proxy:", 0) == 0) {
            spec.kind = StageKind::Proxy;
            const std::string p = s.substr(6);
            spec.proxy_p = (p == "inf" || p == "Inf" || p == "INF")
                               ? std::numeric_limits<double>::infinity()
                               : std::stod(p);
        } else {
            throw std::invalid_argument("unknown stage '" + s + "'");
        }
        return spec;
    }

    std::string str() const {
        switch (kind) {
            case StageKind::Bernstein: return "bernstein";
            case StageKind::Kantorovich: return "kantorovich";
            case StageKind::IteratedU: return "iteru:" + std::to_string(iter_order);
            case StageKind::Proxy:
                return std::isinf(proxy_p) ? "proxy:inf" : "proxy:" + std::to_string(proxy_p);
        }
        return "?";
    }
};

struct PipelineConfig {
    FunctionSpec fn;
    int n = 64;
    StageSpec stage;
    QuantizerConfig quantizer;
    bool quantize_enabled = true;
    double interval_a = 0.2;
    double interval_b = 0.8;
    int grid = 601;       // sup-interval grid
    int lp_points = 2001; // full-interval L^p quadrature grid
};

struct PipelineResult {
    GridFunction stage_coeffs;            // y fed to the quantizer
    std::optional<QuantizationResult> qr; // absent when quantization is disabled
    BernsteinPoly Q;                      // final polynomial (quantized or stage-one)
    ErrorReport report;
    double stage_max_abs = 0.0;
};

inline GridFunction stage_one(const FunctionSpec& f, int n, const StageSpec& stage) {
    switch (stage.kind) {
        case StageKind::Bernstein: return sample_grid(f, n);
        case StageKind::Kantorovich: return kantorovich_coeffs(f, n);
        case StageKind::IteratedU: return iterated_U_coeffs(f, n, stage.iter_order);
        case StageKind::Proxy: {
            const ProxyResult proxy = near_best_proxy(f, n, stage.proxy_p);
            return GridFunction{n, proxy.poly.coeffs};
        }
    }
    throw std::logic_error("unreachable");
}

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult out;
    out.stage_coeffs = stage_one(cfg.fn, cfg.n, cfg.stage);
    const AdmissibleCheck adm = check_onebit_admissible(out.stage_coeffs, cfg.quantizer.mu);
    out.stage_max_abs = adm.max_abs;
    if (cfg.quantize_enabled) {
        if (cfg.quantizer.alphabet.kind == AlphabetKind::PlusMinusOne && !adm.ok) {
            throw AdmissibilityError(adm.max_abs, cfg.quantizer.mu);
        }
        out.qr = quantize(out.stage_coeffs.values, cfg.quantizer);
        out.Q = BernsteinPoly{cfg.n, out.qr->q};
    } else {
        out.Q = BernsteinPoly{cfg.n, out.stage_coeffs.values};
    }

    ErrorReport rep;
    rep.n = cfg.n;
    rep.interval_a = cfg.interval_a;
    rep.interval_b = cfg.interval_b;
    const int r = cfg.quantizer.order;
    const EnvelopeRegime regime = regime_for_order(r);
    rep.grid.resize(static_cast<std::size_t>(cfg.grid));
    rep.f_values.resize(rep.grid.size());
    rep.q_values.resize(rep.grid.size());
    rep.pointwise_error.resize(rep.grid.size());
    rep.envelope_values.resize(rep.grid.size());
    for (int i = 0; i < cfg.grid; ++i) {
        const double x = cfg.interval_a +
                         (cfg.interval_b - cfg.interval_a) * static_cast<double>(i) / (cfg.grid - 1);
        rep.grid[static_cast<std::size_t>(i)] = x;
        rep.f_values[static_cast<std::size_t>(i)] = cfg.fn(x);
        rep.q_values[static_cast<std::size_t>(i)] = eval(out.Q, x);
        rep.pointwise_error[static_cast<std::size_t>(i)] =
            std::abs(rep.f_values[static_cast<std::size_t>(i)] - rep.q_values[static_cast<std::size_t>(i)]);
        rep.envelope_values[static_cast<std::size_t>(i)] = envelope(cfg.n, r, x, regime);
        rep.sup_on_interval = std::max(rep.sup_on_interval, rep.pointwise_error[static_cast<std::size_t>(i)]);
    }
    auto abs_err = [&](double x) { return std::abs(cfg.fn(x) - eval(out.Q, x)); };
    rep.lp_norms["L1"] = lp_norm(abs_err, 1.0, cfg.lp_points);
    rep.lp_norms["L2"] = lp_norm(abs_err, 2.0, cfg.lp_points);
    rep.lp_norms["Linf"] = lp_norm(abs_err, std::numeric_limits<double>::infinity(), cfg.lp_points);
    out.report = std::move(rep);
    return out;
}

// Pointwise audit of |E^Q(x)| <= u_max V_{n,r}(x) + tol on the report grid.
// Returns the worst signed excess (positive means the bound failed).
inline double generic_bound_excess(const PipelineResult& res, int r) {
    if (!res.qr) throw std::invalid_argument("no quantization run to audit");
    const BernsteinPoly eq = quantization_error_poly(res.stage_coeffs.values, res.qr->q, res.stage_coeffs.n);
    double worst = -std::numeric_limits<double>::infinity();
    for (double x : res.report.grid) {
        const double lhs = std::abs(eval(eq, x));
        const double rhs = res.qr->u_max * variation(res.stage_coeffs.n, x, r);
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

struct SweepRow {
    int n = 0;
    double sup_interval = 0.0;
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
    double u_max = 0.0;
    double stage_max_abs = 0.0;
    double bound_excess = 0.0;  // generic-bound audit (quantized runs)
};

// Runs the pipeline for each degree in a worker pool; rows come back in the
// given order regardless of scheduling.
inline std::vector<SweepRow> rate_sweep(const PipelineConfig& base, const std::vector<int>& degrees) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    // std::async with a bounded launch window keeps peak memory sane for the
    // operator-matrix stages at large n.
    std::vector<SweepRow> rows(degrees.size());
    std::size_t next = 0;
    while (next < degrees.size()) {
        const std::size_t batch = std::min<std::size_t>(hw, degrees.size() - next);
        std::vector<std::future<SweepRow>> window;
        for (std::size_t i = 0; i < batch; ++i) {
            const int n = degrees[next + i];
            window.push_back(std::async(std::launch::async, [&base, n]() {
                PipelineConfig cfg = base;
                cfg.n = n;
                const PipelineResult res = run_pipeline(cfg);
                SweepRow row;
                row.n = n;
                row.sup_interval = res.report.sup_on_interval;
                row.l1 = res.report.lp_norms.at("L1");
                row.l2 = res.report.lp_norms.at("L2");
                row.linf = res.report.lp_norms.at("Linf");
                row.u_max = res.qr ? res.qr->u_max : 0.0;
                row.stage_max_abs = res.stage_max_abs;
                row.bound_excess = res.qr ? generic_bound_excess(res, base.quantizer.order) : 0.0;
                return row;
            }));
        }
        for (std::size_t i = 0; i < batch; ++i) rows[next + i] = window[i].get();
        next += batch;
    }
    return rows;
}

// Shortest deterministic round-trip formatting for all serialized doubles.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace bernquant
