// One-bit encoding of a sine wave on [0,1].
//
// Samples f(x) = 0.8 sin(2 pi x) on the Bernstein grid k/n, replaces every
// coefficient with +1 or -1 using the order-2 stable sign rule, and measures
// how fast the reconstruction sum q_k p_{n,k}(x) approaches f as the degree
// grows. Doubling n buys roughly one extra bit of accuracy per octave squared:
// the sup error on the interior decays close to n^{-1}.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "bernquant/analysis.hpp"
#include "bernquant/bernstein.hpp"
#include "bernquant/functions.hpp"
#include "bernquant/operators.hpp"
#include "bernquant/sigma_delta.hpp"

namespace {

double interior_sup_error(const bernquant::FunctionSpec& f, const bernquant::BernsteinPoly& q) {
    // Evaluate on [0.2, 0.8]; the variation envelope blows up near the
    // endpoints, so the interior is where the rate statement lives.
    double worst = 0.0;
    for (int i = 0; i <= 1200; ++i) {
        const double x = 0.2 + 0.6 * static_cast<double>(i) / 1200.0;
        worst = std::max(worst, std::abs(f(x) - bernquant::eval(q, x)));
    }
    return worst;
}

}  // namespace

int main() {
    namespace bq = bernquant;
    const bq::FunctionSpec f = bq::make_function("sin2pi", {0.8});

    bq::QuantizerConfig qc;
    qc.order = 2;
    qc.rule = bq::QuantRule::StableOneBit;
    qc.alphabet.kind = bq::AlphabetKind::PlusMinusOne;
    qc.mu = 0.8;

    std::printf("one-bit sine: f(x) = 0.8 sin(2 pi x), order-2 stable sign rule\n\n");
    std::printf("%6s  %12s  %10s  %12s\n", "n", "sup error", "u_max", "error * n");

    std::vector<double> ns, errs;
    for (int n : {64, 128, 256, 512, 1024}) {
        const bq::GridFunction samples = bq::sample_grid(f, n);
        const bq::AdmissibleCheck adm = bq::check_onebit_admissible(samples, qc.mu);
        if (!adm.ok) {
            std::printf("n = %d: samples exceed mu = %g (max |f(k/n)| = %g), skipping\n", n,
                        qc.mu, adm.max_abs);
            continue;
        }
        const bq::QuantizationResult res = bq::quantize(samples.values, qc);
        const bq::BernsteinPoly q{n, res.q};
        const double err = interior_sup_error(f, q);
        std::printf("%6d  %12.3e  %10.4f  %12.4f\n", n, err, res.u_max, err * n);
        ns.push_back(n);
        errs.push_back(err);
    }

    const double slope = bq::rate_fit(ns, errs).slope;
    std::printf("\nfitted log-log slope: %.3f (order-2 noise shaping targets -1)\n", slope);

    // The encoded object really is one bit per coefficient: show the first
    // 64 signs of the degree-256 codeword.
    {
        const int n = 256;
        const bq::QuantizationResult res = bq::quantize(bq::sample_grid(f, n).values, qc);
        std::printf("\nfirst 64 bits of the degree-%d codeword:\n", n);
        for (int k = 0; k < 64; ++k) std::putchar(res.q[static_cast<std::size_t>(k)] > 0 ? '+' : '-');
        std::putchar('\n');
    }
    return 0;
}
