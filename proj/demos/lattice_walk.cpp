// Walking the coefficient lattice.
//
// The Bernstein coefficients of f(x) = 4x(1-x) are rounded to the lattice
// m_k Delta_{n,k} / C(n,k) with spacing Delta_{n,k} = floor(C(n,k)^alpha).
// At alpha = 0 this is plain half-even rounding of the scaled coefficients;
// raising alpha coarsens the lattice most aggressively in the middle of the
// row, where C(n,k) is huge. The sup distance to the unrounded Bernstein
// polynomial stays below n^(alpha-1) for alpha < 1, and stops decaying at
// alpha = 1: there the lattice admits so few values that accuracy is lost,
// which is the price of a codebook with O(1) integers per coefficient.
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bernquant/bernstein.hpp"
#include "bernquant/functions.hpp"
#include "bernquant/lattice.hpp"
#include "bernquant/operators.hpp"

namespace {

double sup_rounding_error(const bernquant::FunctionSpec& f, int n, double alpha) {
    const bernquant::GridFunction samples = bernquant::sample_grid(f, n);
    const bernquant::BernsteinPoly bn{n, samples.values};
    const bernquant::AlphaRounding rounded = bernquant::round_alpha(f, n, alpha);
    const bernquant::PlainCoeffs pc = bernquant::plain_coeffs(rounded);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = static_cast<double>(i) / 1000.0;
        worst = std::max(worst, std::abs(bernquant::eval(bn, x) - bernquant::eval_plain(pc, x)));
    }
    return worst;
}

}  // namespace

int main() {
    namespace bq = bernquant;
    const bq::FunctionSpec f = bq::make_function("poly", {0.0, 4.0, -4.0});

    std::printf("lattice rounding of f(x) = 4x(1-x): sup |B_n f - rounded| vs n^(alpha-1)\n\n");
    std::printf("%6s", "n");
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) std::printf("  alpha=%-6.2f", alpha);
    std::printf("\n");
    for (int n : {16, 64, 256}) {
        std::printf("%6d", n);
        for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            std::printf("  %12.3e", sup_rounding_error(f, n, alpha));
        }
        std::printf("\n");
        std::printf("%6s", "bound");
        for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            std::printf("  %12.3e", std::pow(n, alpha - 1.0));
        }
        std::printf("\n");
    }

    // Lattice spacing across one row: the middle coefficients live on a much
    // coarser grid than the ends, mirroring the size of C(n,k).
    {
        const int n = 16;
        const bq::LatticeParams p = bq::lattice_params(n, 0.5);
        std::printf("\nDelta_{16,k} at alpha = 0.5:");
        for (const auto& d : p.delta) std::printf(" %lld", d.convert_to<long long>());
        std::printf("\n");
    }

    // Bit budget of the full-coarseness lattice: mu_n = log2(prod_k C(n,k)) /
    // (n+1) is the average number of bits per coefficient that alpha = 1
    // throws away; it grows like n * (log 2)^{-1} * integral of H.
    std::printf("\n%6s  %14s  %10s\n", "n", "log2 M_n", "mu_n / n");
    for (int n : {64, 256, 1024}) {
        const bq::LatticeStats st = bq::lattice_stats(n);
        std::printf("%6d  %14.1f  %10.4f\n", n, st.log2_M_n, st.mu_n / n);
    }
    return 0;
}
