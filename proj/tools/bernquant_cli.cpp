// Command-line front end: quantize / rates / lattice / moments / selftest.
// Emits machine-readable CSV/JSON with a config echo; deterministic given
// identical config and seed (exit codes: 2 admissibility, 3 stability,
// 4 config errors).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bernquant/experiment.hpp"
#include "bernquant/lattice.hpp"

namespace bq = bernquant;
using json = nlohmann::ordered_json;

namespace {

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : split_doubles(s)) out.push_back(static_cast<int>(v));
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct CommonOpts {
    std::string fn_id = "sin2pi";
    std::string params_str = "0.8";
    std::string degrees_str = "64";
    int order = 1;
    std::string alphabet = "pm1";
    std::string rule = "greedy";
    double mu = 1.0;
    std::string stage = "bernstein";
    std::string interval_str = "0.2,0.8";
    std::string alpha_str = "0,0.5,1";
    int grid = 601;
    std::string out;
    std::uint64_t seed = 1;
    bool no_quantize = false;
    std::string config_path;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--fn", o.fn_id, "registry function id (const, linear, abs, sin2pi, exp, poly)");
    sub->add_option("--params", o.params_str, "comma-separated function parameters");
    sub->add_option("--n", o.degrees_str, "comma-separated degree list");
    sub->add_option("--order", o.order, "sigma-delta order r");
    sub->add_option("--alphabet", o.alphabet, "int | pm1");
    sub->add_option("--rule", o.rule, "greedy | stable | filtered");
    sub->add_option("--mu", o.mu, "declared input bound for stability");
    sub->add_option("--stage", o.stage, "bernstein | kantorovich | iteru:R | proxy:P");
    sub->add_option("--interval", o.interval_str, "a,b for sup-norm interval");
    sub->add_option("--alpha", o.alpha_str, "comma-separated lattice alphas");
    sub->add_option("--grid", o.grid, "sup-interval grid size");
    sub->add_option("--out", o.out, "output path prefix");
    sub->add_option("--seed", o.seed, "seed for randomized sweeps");
    sub->add_flag("--no-quantize", o.no_quantize, "measure the stage-one approximant without quantizing");
    sub->add_option("--config", o.config_path, "flat key = JSON-value config file (flags override)");
}

// Flat "key = JSON" lines; applied only where the flag was not passed.
void apply_config(CLI::App* sub, CommonOpts& o) {
    std::map<std::string, json> kv;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::invalid_argument("cannot open config file '" + o.config_path + "'");
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
            kv[trim(line.substr(0, eq))] = json::parse(trim(line.substr(eq + 1)));
        }
    }
    // Choosing a function without supplying parameters means that function's
    // own parameter list; the sin2pi default would otherwise leak into it.
    if ((sub->count("--fn") > 0 || kv.count("fn")) && sub->count("--params") == 0 &&
        !kv.count("params")) {
        o.params_str.clear();
    }
    auto unset = [&](const std::string& flag) { return sub->count("--" + flag) == 0 && kv.count(flag); };
    auto as_list_string = [](const json& j) {
        if (j.is_string()) return j.get<std::string>();
        std::string s;
        for (const auto& v : j) {
            if (!s.empty()) s += ",";
            s += v.dump();
        }
        return s;
    };
    if (unset("fn")) o.fn_id = kv["fn"].get<std::string>();
    if (unset("params")) o.params_str = as_list_string(kv["params"]);
    if (unset("n")) o.degrees_str = as_list_string(kv["n"]);
    if (unset("order")) o.order = kv["order"].get<int>();
    if (unset("alphabet")) o.alphabet = kv["alphabet"].get<std::string>();
    if (unset("rule")) o.rule = kv["rule"].get<std::string>();
    if (unset("mu")) o.mu = kv["mu"].get<double>();
    if (unset("stage")) o.stage = kv["stage"].get<std::string>();
    if (unset("interval")) o.interval_str = as_list_string(kv["interval"]);
    if (unset("alpha")) o.alpha_str = as_list_string(kv["alpha"]);
    if (unset("grid")) o.grid = kv["grid"].get<int>();
    if (unset("out")) o.out = kv["out"].get<std::string>();
    if (unset("seed")) o.seed = kv["seed"].get<std::uint64_t>();
    if (unset("no-quantize")) o.no_quantize = kv["no-quantize"].get<bool>();
}

json config_echo(const CommonOpts& o) {
    json j;
    j["schema"] = 1;
    j["fn"] = o.fn_id;
    j["params"] = split_doubles(o.params_str);
    j["n"] = split_ints(o.degrees_str);
    j["order"] = o.order;
    j["alphabet"] = o.alphabet;
    j["rule"] = o.rule;
    j["mu"] = o.mu;
    j["stage"] = o.stage;
    j["interval"] = split_doubles(o.interval_str);
    j["alpha"] = split_doubles(o.alpha_str);
    j["grid"] = o.grid;
    j["seed"] = o.seed;
    j["quantize"] = !o.no_quantize;
    return j;
}

bq::PipelineConfig build_pipeline(const CommonOpts& o, int n) {
    bq::PipelineConfig cfg;
    cfg.fn = bq::make_function(o.fn_id, split_doubles(o.params_str));
    cfg.n = n;
    cfg.stage = bq::StageSpec::parse(o.stage);
    cfg.quantizer.order = o.order;
    if (o.alphabet == "int") {
        cfg.quantizer.alphabet.kind = bq::AlphabetKind::Integers;
    } else if (o.alphabet == "pm1") {
        cfg.quantizer.alphabet.kind = bq::AlphabetKind::PlusMinusOne;
    } else {
        throw std::invalid_argument("alphabet must be 'int' or 'pm1'");
    }
    if (o.rule == "greedy") {
        cfg.quantizer.rule = bq::QuantRule::Greedy;
    } else if (o.rule == "stable") {
        cfg.quantizer.rule = bq::QuantRule::StableOneBit;
    } else if (o.rule == "filtered") {
        cfg.quantizer.rule = bq::QuantRule::FilteredOneBit;
    } else {
        throw std::invalid_argument("rule must be 'greedy', 'stable', or 'filtered'");
    }
    cfg.quantizer.mu = o.mu;
    cfg.quantize_enabled = !o.no_quantize;
    const std::vector<double> iv = split_doubles(o.interval_str);
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw std::invalid_argument("--interval needs a,b with a < b");
    if (!(iv[0] > 0.0 && iv[1] < 1.0)) {
        throw std::invalid_argument("--interval must lie strictly inside (0,1); the variation "
                                    "envelope is unbounded at the endpoints");
    }
    cfg.interval_a = iv[0];
    cfg.interval_b = iv[1];
    cfg.grid = o.grid;
    return cfg;
}

// Shared --n contract: at least one degree, strictly increasing.
std::vector<int> parse_degrees(const std::string& s) {
    const std::vector<int> degrees = split_ints(s);
    if (degrees.empty()) throw std::invalid_argument("--n needs at least one degree");
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        if (degrees[i] <= degrees[i - 1]) {
            throw std::invalid_argument("degree list must be strictly increasing");
        }
    }
    return degrees;
}

void write_lines(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << body;
}

std::string csv_header(const json& cfg) {
    return "# schema: 1\n# config: " + cfg.dump() + "\n";
}

int cmd_quantize(const CommonOpts& o) {
    const std::vector<int> degrees = parse_degrees(o.degrees_str);
    const bq::PipelineConfig cfg = build_pipeline(o, degrees.front());
    const bq::PipelineResult res = bq::run_pipeline(cfg);
    const json echo = config_echo(o);
    std::printf("n=%d sup[%g,%g]=%s L1=%s L2=%s u_max=%s\n", cfg.n, cfg.interval_a, cfg.interval_b,
                bq::fmt_g17(res.report.sup_on_interval).c_str(),
                bq::fmt_g17(res.report.lp_norms.at("L1")).c_str(),
                bq::fmt_g17(res.report.lp_norms.at("L2")).c_str(),
                bq::fmt_g17(res.qr ? res.qr->u_max : 0.0).c_str());
    if (!o.out.empty()) {
        json coeffs;
        coeffs["schema"] = 1;
        coeffs["config"] = echo;
        coeffs["q"] = res.Q.coeffs;
        coeffs["u_max"] = res.qr ? res.qr->u_max : 0.0;
        coeffs["order"] = o.order;
        coeffs["alphabet"] = o.alphabet;
        write_lines(o.out + ".coeffs.json", coeffs.dump(2) + "\n");

        std::string csv = csv_header(echo) + "x,f,Q,abs_error,envelope\n";
        for (std::size_t i = 0; i < res.report.grid.size(); ++i) {
            csv += bq::fmt_g17(res.report.grid[i]) + "," + bq::fmt_g17(res.report.f_values[i]) + "," +
                   bq::fmt_g17(res.report.q_values[i]) + "," + bq::fmt_g17(res.report.pointwise_error[i]) +
                   "," + bq::fmt_g17(res.report.envelope_values[i]) + "\n";
        }
        write_lines(o.out + ".report.csv", csv);

        json rep;
        rep["schema"] = 1;
        rep["config"] = echo;
        rep["n"] = res.report.n;
        rep["sup_on_interval"] = res.report.sup_on_interval;
        rep["lp_norms"] = res.report.lp_norms;
        rep["u_max"] = res.qr ? res.qr->u_max : 0.0;
        rep["stage_max_abs"] = res.stage_max_abs;
        write_lines(o.out + ".report.json", rep.dump(2) + "\n");
    }
    return 0;
}

int cmd_rates(const CommonOpts& o) {
    const std::vector<int> degrees = parse_degrees(o.degrees_str);
    if (degrees.size() < 4) throw std::invalid_argument("rates needs at least 4 degrees");
    const bq::PipelineConfig base = build_pipeline(o, degrees.front());
    const std::vector<bq::SweepRow> rows = bq::rate_sweep(base, degrees);
    std::vector<double> ns, sup, l1, l2, linf;
    for (const auto& r : rows) {
        ns.push_back(r.n);
        sup.push_back(r.sup_interval);
        l1.push_back(r.l1);
        l2.push_back(r.l2);
        linf.push_back(r.linf);
    }
    const double s_sup = bq::rate_fit(ns, sup).slope;
    const double s_l1 = bq::rate_fit(ns, l1).slope;
    const double s_l2 = bq::rate_fit(ns, l2).slope;
    const double s_linf = bq::rate_fit(ns, linf).slope;
    std::string csv = csv_header(config_echo(o)) + "n,sup_interval,L1,L2,Linf,u_max,stage_max_abs,bound_excess\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.n) + "," + bq::fmt_g17(r.sup_interval) + "," + bq::fmt_g17(r.l1) + "," +
               bq::fmt_g17(r.l2) + "," + bq::fmt_g17(r.linf) + "," + bq::fmt_g17(r.u_max) + "," +
               bq::fmt_g17(r.stage_max_abs) + "," + bq::fmt_g17(r.bound_excess) + "\n";
    }
    csv += "slope," + bq::fmt_g17(s_sup) + "," + bq::fmt_g17(s_l1) + "," + bq::fmt_g17(s_l2) + "," +
           bq::fmt_g17(s_linf) + ",,,\n";
    if (!o.out.empty()) write_lines(o.out + ".csv", csv);
    std::printf("sup slope = %s  (L1 %s, L2 %s, Linf %s)\n", bq::fmt_g17(s_sup).c_str(),
                bq::fmt_g17(s_l1).c_str(), bq::fmt_g17(s_l2).c_str(), bq::fmt_g17(s_linf).c_str());
    return 0;
}

int cmd_lattice(const CommonOpts& o) {
    const std::vector<int> degrees = parse_degrees(o.degrees_str);
    const std::vector<double> alphas = split_doubles(o.alpha_str);
    if (alphas.empty()) throw std::invalid_argument("lattice needs --alpha");
    const bq::FunctionSpec f = bq::make_function(o.fn_id, split_doubles(o.params_str));
    std::string csv = csv_header(config_echo(o)) + "n,alpha,log2_M,mu_n,sup_error,envelope\n";
    for (int n : degrees) {
        const bq::LatticeStats st = bq::lattice_stats(n);
        const bq::BernsteinPoly bn{n, bq::sample_grid(f, n).values};
        for (double alpha : alphas) {
            const bq::AlphaRounding ar = bq::round_alpha(f, n, alpha);
            const bq::PlainCoeffs pc = bq::plain_coeffs(ar);
            double worst = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double x = static_cast<double>(i) / 2000.0;
                worst = std::max(worst, std::abs(bq::eval(bn, x) - bq::eval_plain(pc, x)));
            }
            const double env = std::pow(n, -1.0 + alpha);
            csv += std::to_string(n) + "," + bq::fmt_g17(alpha) + "," + bq::fmt_g17(st.log2_M_n) + "," +
                   bq::fmt_g17(st.mu_n) + "," + bq::fmt_g17(worst) + "," + bq::fmt_g17(env) + "\n";
        }
    }
    if (!o.out.empty()) write_lines(o.out + ".csv", csv);
    else std::fputs(csv.c_str(), stdout);
    return 0;
}

int cmd_moments(const CommonOpts& o) {
    const std::vector<int> degrees = parse_degrees(o.degrees_str);
    const int r = o.order;
    std::string csv = csv_header(config_echo(o)) + "n,x,T1,T2,V1,V2,Vr,Yr1\n";
    std::vector<double> ns, vmid;
    for (int n : degrees) {
        std::vector<double> xs, vr;
        for (int i = 0; i < o.grid; ++i) {
            const double x = 0.2 + 0.6 * static_cast<double>(i) / (o.grid - 1);
            const double v_r = bq::variation(n, x, r);
            xs.push_back(x * (1.0 - x));
            vr.push_back(v_r);
            csv += std::to_string(n) + "," + bq::fmt_g17(x) + "," + bq::fmt_g17(bq::moment(n, x, 1)) + "," +
                   bq::fmt_g17(bq::moment(n, x, 2)) + "," + bq::fmt_g17(bq::variation(n, x, 1)) + "," +
                   bq::fmt_g17(bq::variation(n, x, 2)) + "," + bq::fmt_g17(v_r) + "," +
                   bq::fmt_g17(bq::abs_moment(n, x, r, 1)) + "\n";
        }
        // Measured X-exponent of V_{n,r} at fixed n (open question: -r/2 vs -r).
        const bq::RateFit fx = bq::rate_fit(xs, vr);
        csv += "# n=" + std::to_string(n) + " r=" + std::to_string(r) +
               " fitted_X_exponent=" + bq::fmt_g17(fx.slope) + "\n";
        ns.push_back(n);
        vmid.push_back(bq::variation(n, 0.5, r));
    }
    if (ns.size() >= 4) {
        const bq::RateFit fn_fit = bq::rate_fit(ns, vmid);
        csv += "# r=" + std::to_string(r) + " fitted_n_exponent_at_x0.5=" + bq::fmt_g17(fn_fit.slope) + "\n";
    }
    if (!o.out.empty()) write_lines(o.out + ".csv", csv);
    else std::fputs(csv.c_str(), stdout);
    return 0;
}

int cmd_selftest(const CommonOpts& o) {
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok) {
        std::printf("%s %s\n", ok ? "ok  " : "FAIL", name.c_str());
        if (!ok) ++failures;
    };
    {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const auto row = bq::basis_row(256, static_cast<double>(i) / 100.0);
            double s = 0.0;
            for (double v : row) s += v;
            worst = std::max(worst, std::abs(s - 1.0));
        }
        check("partition of unity (n=256)", worst < 1e-12);
    }
    {
        bq::QuantizerConfig qc;
        qc.order = 1;
        qc.alphabet.kind = bq::AlphabetKind::Integers;
        const auto res = bq::quantize({0.6, 0.6, 0.6}, qc);
        check("greedy recursion example", res.q == std::vector<double>({1, 0, 1}));
    }
    {
        const auto d = bq::basis_diff(16, 0.37, 1);
        double s = 0.0;
        for (double v : d.values) s += v;
        check("difference telescoping (n=16)", std::abs(s - std::pow(1.0 - 0.37, 16)) < 1e-14);
    }
    {
        std::mt19937_64 rng(o.seed);
        std::vector<double> y(2000);
        for (double& v : y) v = std::ldexp(static_cast<double>(rng() >> 11), -53) * 1.6 - 0.8;
        bq::QuantizerConfig qc;
        qc.order = 3;
        qc.alphabet.kind = bq::AlphabetKind::PlusMinusOne;
        qc.rule = bq::QuantRule::FilteredOneBit;
        qc.mu = 0.8;
        const auto res = bq::quantize(y, qc);
        const auto filt = bq::stable_filter_for(3, 0.8);
        check("filtered one-bit r=3 bounded", res.u_max <= filt.l1_g);
        const auto res2 = bq::quantize(y, qc);
        check("determinism (bit-identical rerun)", res.q == res2.q && res.u == res2.u);
    }
    {
        const auto pr = bq::pr_coeffs(4);
        check("iterated-operator coefficients r=4",
              pr.c == std::vector<double>({4, -2, 2}) && pr.C_r == 8.0);
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bernstein-form coarse quantization experiments"};
    app.require_subcommand(1);
    CommonOpts o;
    CLI::App* sub_quantize = app.add_subcommand("quantize", "two-stage quantization run");
    CLI::App* sub_rates = app.add_subcommand("rates", "degree sweep with fitted rate slopes");
    CLI::App* sub_lattice = app.add_subcommand("lattice", "integer-lattice rounding family diagnostics");
    CLI::App* sub_moments = app.add_subcommand("moments", "basis variation/moment diagnostics");
    CLI::App* sub_selftest = app.add_subcommand("selftest", "quick invariant battery");
    for (CLI::App* sub : {sub_quantize, sub_rates, sub_lattice, sub_moments, sub_selftest}) {
        add_common(sub, o);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }
    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, o);
        if (sub == sub_quantize) return cmd_quantize(o);
        if (sub == sub_rates) return cmd_rates(o);
        if (sub == sub_lattice) return cmd_lattice(o);
        if (sub == sub_moments) return cmd_moments(o);
        return cmd_selftest(o);
    } catch (const bq::AdmissibilityError& e) {
        std::fprintf(stderr, "admissibility: %s\n", e.what());
        return 2;
    } catch (const bq::PreconditionError& e) {
        std::fprintf(stderr, "precondition: %s\n", e.what());
        return 2;
    } catch (const bq::StabilityViolation& e) {
        std::fprintf(stderr, "stability: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
