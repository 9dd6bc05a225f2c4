#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bernquant/bernstein.hpp"

namespace {

double uniform01(std::mt19937_64& rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

double horner(const std::vector<double>& a, double x) {
    double v = 0.0;
    for (std::size_t j = a.size(); j-- > 0;) v = v * x + a[j];
    return v;
}

double odd_factorial(int m) {  // (2m-1)!! = 1*3*5*...*(2m-1)
    double v = 1.0;
    for (int i = 3; i <= 2 * m - 1; i += 2) v *= i;
    return v;
}

}  // namespace

TEST_CASE("basis_value matches closed-form values", "[bernstein]") {
    CHECK(bernquant::basis_value(2, 1, 0.5) == Catch::Approx(0.5).margin(1e-15));
    CHECK(bernquant::basis_value(4, 0, 0.0) == 1.0);
    CHECK(bernquant::basis_value(4, 0, 1.0) == 0.0);
    CHECK(bernquant::basis_value(4, 4, 1.0) == 1.0);
    CHECK(bernquant::basis_value(3, 1, 0.4) == Catch::Approx(0.432).margin(1e-15));
    CHECK(bernquant::basis_value(3, 7, 0.4) == 0.0);  // k > n vanishes by convention
}

TEST_CASE("basis_value rejects out-of-domain arguments", "[bernstein]") {
    CHECK_THROWS_AS(bernquant::basis_value(3, 1, -0.1), std::domain_error);
    CHECK_THROWS_AS(bernquant::basis_value(3, 1, 1.5), std::domain_error);
    CHECK_THROWS_AS(bernquant::basis_value(-1, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(bernquant::basis_value(3, -2, 0.5), std::domain_error);
}

TEST_CASE("basis_row partitions unity to 1e-12", "[bernstein]") {
    for (int n : {16, 256, 4096}) {
        for (int i = 0; i <= 100; ++i) {
            const double x = static_cast<double>(i) / 100.0;
            const std::vector<double> row = bernquant::basis_row(n, x);
            double s = 0.0;
            for (double v : row) s += v;
            REQUIRE(std::abs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("scalar basis values partition unity at moderate degree", "[bernstein]") {
    for (int n : {16, 256}) {
        for (double x : {0.1, 0.37, 0.5, 0.73, 0.9}) {
            double s = 0.0;
            for (int k = 0; k <= n; ++k) s += bernquant::basis_value(n, k, x);
            REQUIRE(std::abs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("basis_row agrees with scalar evaluation", "[bernstein]") {
    const int n = 256;
    for (double x : {0.05, 0.3, 0.5, 0.68, 0.95}) {
        const std::vector<double> row = bernquant::basis_row(n, x);
        for (int k = 0; k <= n; k += 16) {
            const double ref = bernquant::basis_value(n, k, x);
            if (ref > 1e-280) {
                REQUIRE(std::abs(row[static_cast<std::size_t>(k)] - ref) <= 1e-10 * ref);
            }
        }
    }
}

TEST_CASE("eval reproduces constants and linear data", "[bernstein]") {
    bernquant::BernsteinPoly c{5, std::vector<double>(6, 3.25)};
    CHECK(bernquant::eval(c, 0.31) == Catch::Approx(3.25).margin(1e-14));

    const int n = 40;
    bernquant::BernsteinPoly lin{n, {}};
    for (int k = 0; k <= n; ++k) lin.coeffs.push_back(static_cast<double>(k) / n);
    CHECK(bernquant::eval(lin, 0.37) == Catch::Approx(0.37).margin(1e-13));

    bernquant::BernsteinPoly unit{3, {0.0, 1.0, 0.0, 0.0}};
    CHECK(bernquant::eval(unit, 0.4) == Catch::Approx(0.432).margin(1e-14));

    bernquant::BernsteinPoly bad{3, {0.0, 1.0}};
    CHECK_THROWS_AS(bernquant::eval(bad, 0.5), std::invalid_argument);
}

TEST_CASE("eval agrees with the de Casteljau backend", "[bernstein]") {
    std::mt19937_64 rng(20260815);
    for (int n : {8, 64, 512}) {
        bernquant::BernsteinPoly poly{n, {}};
        for (int k = 0; k <= n; ++k) poly.coeffs.push_back(2.0 * uniform01(rng) - 1.0);
        for (int i = 0; i <= 40; ++i) {
            const double x = static_cast<double>(i) / 40.0;
            const double a = bernquant::eval(poly, x);
            const double b = bernquant::eval_decasteljau(poly, x);
            REQUIRE(std::abs(a - b) <= 1e-10);
        }
    }
}

TEST_CASE("basis_diff order zero returns the row itself", "[bernstein]") {
    const auto d = bernquant::basis_diff(12, 0.3, 0);
    const auto row = bernquant::basis_row(12, 0.3);
    REQUIRE(d.order == 0);
    REQUIRE(d.values == row);
}

TEST_CASE("first differences match closed forms and telescope", "[bernstein]") {
    const auto d = bernquant::basis_diff(3, 0.4, 1);
    // p_{3,1}(0.4) - p_{3,2}(0.4) = 0.432 - 0.288
    CHECK(d.values[1] == Catch::Approx(0.144).margin(1e-14));

    const int n = 16;
    for (double x : {0.1, 0.4, 0.5, 0.85}) {
        const auto dn = bernquant::basis_diff(n, x, 1);
        double s = 0.0;
        for (double v : dn.values) s += v;
        // sum_k (p_k - p_{k+1}) telescopes to p_{n,0}(x) = (1-x)^n
        REQUIRE(s == Catch::Approx(std::pow(1.0 - x, n)).margin(1e-13));
    }
}

TEST_CASE("first difference equals the degree-raised ratio identity", "[bernstein]") {
    // p_{n,k} - p_{n,k+1} = ((k+1 - (n+1)x) / ((n+1) x(1-x))) p_{n+1,k+1}
    for (int n : {4, 17, 64}) {
        for (double x : {0.15, 0.5, 0.77}) {
            const double X = x * (1.0 - x);
            const auto d = bernquant::basis_diff(n, x, 1);
            const auto up = bernquant::basis_row(n + 1, x);
            for (int k = 0; k <= n; ++k) {
                const double rhs = (k + 1 - (n + 1) * x) / ((n + 1) * X) *
                                   up[static_cast<std::size_t>(k) + 1];
                REQUIRE(std::abs(d.values[static_cast<std::size_t>(k)] - rhs) <= 1e-12);
            }
        }
    }
}

TEST_CASE("second differences match the three-term combination", "[bernstein]") {
    const int n = 20;
    const double x = 0.3;
    const auto d = bernquant::basis_diff(n, x, 2);
    auto p = [&](int k) { return k <= n ? bernquant::basis_value(n, k, x) : 0.0; };
    for (int k = 0; k <= n; ++k) {
        const double ref = p(k) - 2.0 * p(k + 1) + p(k + 2);
        REQUIRE(std::abs(d.values[static_cast<std::size_t>(k)] - ref) <= 1e-13);
    }
}

TEST_CASE("variation of order zero is the partition sum", "[bernstein]") {
    CHECK(bernquant::variation(32, 0.4, 0) == Catch::Approx(1.0).margin(1e-13));
    CHECK(bernquant::variation(7, 0.0, 0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("variation obeys the closed-form envelopes", "[bernstein]") {
    // V_{n,1}(x) <= 1/sqrt((n+1)X) and V_{n,2}(x) <= 2/((n+1)X), X = x(1-x).
    {
        const int n = 100;
        const double X = 0.25;
        CHECK(bernquant::variation(n, 0.5, 1) <= 1.0 / std::sqrt((n + 1) * X) + 1e-15);
        CHECK(bernquant::variation(n, 0.5, 2) <= 2.0 / ((n + 1) * X) + 1e-15);
    }
    for (int n : {16, 64, 256, 1024}) {
        for (int i = 1; i <= 17; ++i) {
            const double x = 0.1 + 0.8 * static_cast<double>(i - 1) / 16.0;
            const double X = x * (1.0 - x);
            const double v1 = bernquant::variation(n, x, 1);
            const double v2 = bernquant::variation(n, x, 2);
            REQUIRE(v1 > 0.0);
            REQUIRE(v1 <= 1.0 / std::sqrt((n + 1) * X) + 1e-13);
            REQUIRE(v2 <= 2.0 / ((n + 1) * X) + 1e-13);
        }
    }
}

TEST_CASE("central moments match closed forms", "[bernstein]") {
    CHECK(bernquant::moment(25, 0.3, 0) == Catch::Approx(1.0).margin(1e-13));
    CHECK(std::abs(bernquant::moment(50, 0.3, 1)) <= 1e-10);
    // T_2(n, x) = n x(1-x)
    CHECK(bernquant::moment(10, 0.3, 2) == Catch::Approx(2.1).epsilon(1e-10));
    CHECK(bernquant::moment(4096, 0.37, 2) ==
          Catch::Approx(4096 * 0.37 * 0.63).epsilon(1e-10));
    CHECK_THROWS_AS(bernquant::moment(10, 0.3, -1), std::domain_error);
}

TEST_CASE("even central moments grow like (nX)^s", "[bernstein]") {
    // T_{2s} <= 3 (2s-1)!! (nX)^s on the interior; the classical constant is
    // (2s-1)!! asymptotically, the factor 3 absorbs finite-n corrections.
    for (int s : {2, 3, 4}) {
        const double cap = 3.0 * odd_factorial(s);
        for (int n : {16, 64, 256}) {
            for (int i = 0; i <= 16; ++i) {
                const double x = 0.1 + 0.8 * static_cast<double>(i) / 16.0;
                const double nX = n * x * (1.0 - x);
                REQUIRE(bernquant::moment(n, x, 2 * s) <= cap * std::pow(nX, s));
            }
        }
    }
    // Flatness in n at fixed x: T_{2s}/n^s settles to a constant.
    for (int s : {2, 3, 4}) {
        double lo = 1e300, hi = 0.0;
        for (int n : {64, 256, 1024, 4096}) {
            const double ratio = bernquant::moment(n, 0.5, 2 * s) / std::pow(n, s);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        REQUIRE(hi <= 1.25 * lo);
    }
}

TEST_CASE("abs_moment is nonnegative and dominates nothing spurious", "[bernstein]") {
    const double y11 = bernquant::abs_moment(100, 0.5, 1, 1);
    REQUIRE(y11 > 0.0);
    // |sum (k-nx) dp_k| <= Y_{1,1}; the signed version is the second moment identity.
    const double t2 = bernquant::moment(100, 0.5, 2);
    REQUIRE(y11 <= t2);  // crude sanity: Y_{1,1} <= T_2 at x=1/2 for n=100
}

TEST_CASE("power_to_bernstein reproduces exact conversions", "[bernstein]") {
    {
        const auto c = bernquant::power_to_bernstein({5.0}, 3);
        REQUIRE(c.exact);
        for (double b : c.poly.coeffs) CHECK(b == 5.0);
    }
    {
        const auto c = bernquant::power_to_bernstein({0.0, 1.0}, 4);
        const std::vector<double> want{0.0, 0.25, 0.5, 0.75, 1.0};
        REQUIRE(c.poly.coeffs.size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k) {
            CHECK(c.poly.coeffs[k] == Catch::Approx(want[k]).margin(1e-15));
        }
    }
    {
        const auto c = bernquant::power_to_bernstein({0.0, 0.0, 1.0}, 2);
        CHECK(c.poly.coeffs == std::vector<double>{0.0, 0.0, 1.0});
    }
    {
        // x^2 at n = 4: b_k = C(k,2)/C(4,2)
        const auto c = bernquant::power_to_bernstein({0.0, 0.0, 1.0}, 4);
        const std::vector<double> want{0.0, 0.0, 1.0 / 6.0, 0.5, 1.0};
        for (std::size_t k = 0; k < want.size(); ++k) {
            CHECK(c.poly.coeffs[k] == Catch::Approx(want[k]).margin(1e-15));
        }
    }
}

TEST_CASE("power_to_bernstein flags and errors", "[bernstein]") {
    CHECK_THROWS_AS(bernquant::power_to_bernstein({0.0, 0.0, 1.0}, 1), std::invalid_argument);
    CHECK_NOTHROW(bernquant::power_to_bernstein({1.0, 0.0, 0.0, 0.0}, 1));  // trailing zeros
    CHECK(bernquant::power_to_bernstein({1.0, 1.0}, 20).exact);
    CHECK_FALSE(bernquant::power_to_bernstein({1.0, 1.0}, 21).exact);
    CHECK_FALSE(bernquant::power_to_bernstein({1.0, 1.0}, 64).condition_warning);
    CHECK(bernquant::power_to_bernstein({1.0, 1.0}, 65).condition_warning);
    const double lc16 = bernquant::power_to_bernstein({1.0, 1.0}, 16).log2_condition;
    const double lc64 = bernquant::power_to_bernstein({1.0, 1.0}, 64).log2_condition;
    CHECK(lc16 > 0.0);
    CHECK(lc64 > lc16);
}

TEST_CASE("floating-point conversion path agrees with Horner", "[bernstein]") {
    const std::vector<double> a{0.5, -0.25, 0.125, 0.0625};
    const auto c = bernquant::power_to_bernstein(a, 24);
    REQUIRE_FALSE(c.exact);
    for (int i = 0; i <= 24; ++i) {
        const double x = static_cast<double>(i) / 24.0;
        REQUIRE(std::abs(bernquant::eval(c.poly, x) - horner(a, x)) <= 1e-12);
    }
}
