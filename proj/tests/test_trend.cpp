#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "crisislda/trend.hpp"
#include "fixtures.hpp"

using namespace crisislda;

namespace {

// Dense-matrix reference solve of (I + lam D'D) tau = y, independent of the
// banded implementation.
std::vector<double> hp_dense_oracle(const std::vector<double>& y, double lam) {
    const std::size_t n = y.size();
    // build D'D explicitly from the (n-2) x n second-difference matrix
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    for (std::size_t r = 0; r + 2 < n; ++r) {
        const double row[3] = {1.0, -2.0, 1.0};
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                a[r + p][r + q] += lam * row[p] * row[q];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> b = y;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

TEST_CASE("hp_filter returns a perfect line unchanged") {
    const std::vector<double> line = {1, 2, 3, 4, 5};
    for (double lam : {1e-4, 1.0, 100.0, 1600.0}) {
        auto tau = hp_filter(line, lam);
        for (std::size_t i = 0; i < line.size(); ++i) {
            CHECK(tau[i] == doctest::Approx(line[i]).epsilon(1e-12));
        }
    }
    // extreme smoothing: forward error grows with the condition number
    // (~16*lam), so only ~1e-7 is attainable in double at lam = 1e8
    auto tau = hp_filter(line, 1e8);
    for (std::size_t i = 0; i < line.size(); ++i) {
        CHECK(std::fabs(tau[i] - line[i]) < 1e-6);
    }
}

TEST_CASE("hp_filter approaches the series as smoothing vanishes") {
    const std::vector<double> y = {3.2, 1.1, 4.7, 2.2, 5.9, 2.8};
    auto tau = hp_filter(y, 1e-8);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::fabs(tau[i] - y[i]) < 1e-6);
    }
}

TEST_CASE("hp_filter matches a dense normal-equation solve") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(50.0, 150.0);
    std::vector<double> y(20);
    for (double& v : y) v = u(rng);
    auto tau = hp_filter(y, 100.0);
    auto ref = hp_dense_oracle(y, 100.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::fabs(tau[i] - ref[i]) < 1e-8);
    }
}

TEST_CASE("hp_filter is linear and preserves the mean") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y1(15), y2(15);
    for (std::size_t i = 0; i < y1.size(); ++i) {
        y1[i] = u(rng);
        y2[i] = u(rng);
    }
    const double a = 2.5, b = -1.75;
    std::vector<double> combo(y1.size());
    for (std::size_t i = 0; i < y1.size(); ++i) combo[i] = a * y1[i] + b * y2[i];

    auto t1 = hp_filter(y1, 100.0);
    auto t2 = hp_filter(y2, 100.0);
    auto tc = hp_filter(combo, 100.0);
    double mean_y = 0.0, mean_t = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        CHECK(std::fabs(tc[i] - (a * t1[i] + b * t2[i])) < 1e-8);
        mean_y += y1[i];
        mean_t += t1[i];
    }
    CHECK(std::fabs(mean_y - mean_t) / y1.size() < 1e-8);
}

TEST_CASE("hp_filter rejects short series") {
    CHECK_THROWS_AS(hp_filter({1.0, 2.0, 3.0}, 100.0), ValidationError);
}

TEST_CASE("precrisis_growth of a geometric series returns the exact ratio") {
    auto s = testutil::geometric_series("XXX", 1980, 20, 100.0, 1.02);
    TrendSpec spec;
    spec.method = TrendMethod::AverageGrowth;
    spec.window_years = 10;
    CHECK(precrisis_growth(s, 1995, spec) == doctest::Approx(1.02).epsilon(1e-12));
    spec.window_years = 3;
    CHECK(precrisis_growth(s, 1995, spec) == doctest::Approx(1.02).epsilon(1e-12));
}

TEST_CASE("precrisis_growth flags insufficient history") {
    auto s = testutil::geometric_series("XXX", 1990, 8, 100.0, 1.02);
    TrendSpec spec;
    spec.window_years = 10;
    CHECK_THROWS_WITH_AS(precrisis_growth(s, 1995, spec),
                         doctest::Contains("InsufficientHistory"), ValidationError);
}

TEST_CASE("HP-filtered growth of a clean geometric series matches its ratio") {
    auto s = testutil::geometric_series("XXX", 1970, 30, 100.0, 1.032);
    TrendSpec spec;
    spec.method = TrendMethod::HpFiltered;
    spec.window_years = 10;
    spec.smoothing = 100.0;
    // log of a geometric series is a line; the filter keeps it
    CHECK(precrisis_growth(s, 1995, spec) == doctest::Approx(1.032).epsilon(1e-10));
}

TEST_CASE("build_counterfactual compounds from the observed onset base") {
    GdpSeries s;
    s.country_id = "XXX";
    s.first_year = 1989;
    s.values = {86.38, 90.70, 95.24, 100.0, 95.0, 94.0, 93.0};
    TrendSpec spec;
    spec.method = TrendMethod::AverageGrowth;
    spec.window_years = 3;
    auto cf = build_counterfactual(s, 1993, spec);
    CHECK(cf.base_level == 100.0);
    CHECK(cf.growth_rate == doctest::Approx(std::pow(100.0 / 86.38, 1.0 / 3.0)));

    // flat series: constant counterfactual
    auto flat = testutil::geometric_series("FLT", 1980, 15, 100.0, 1.0);
    auto cf_flat = build_counterfactual(flat, 1992, spec);
    CHECK(cf_flat.growth_rate == doctest::Approx(1.0));
    CHECK(cf_flat.level(1995) == doctest::Approx(100.0));
}

TEST_CASE("counterfactual levels: base 100 at 5% over 3 years") {
    auto s = testutil::geometric_series("XXX", 1980, 12, 100.0 / std::pow(1.05, 11), 1.05);
    TrendSpec spec;
    spec.method = TrendMethod::AverageGrowth;
    spec.window_years = 10;
    auto cf = build_counterfactual(s, 1992, spec);
    CHECK(cf.base_level == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(cf.level(1992) == doctest::Approx(105.0).epsilon(1e-9));
    CHECK(cf.level(1993) == doctest::Approx(110.25).epsilon(1e-9));
    CHECK(cf.level(1994) == doctest::Approx(115.7625).epsilon(1e-9));
}

TEST_CASE("counterfactual is scale-equivariant") {
    auto s = testutil::geometric_series("XXX", 1975, 25, 80.0, 1.0);
    // perturb to something non-trivial
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        s.values[i] *= 1.0 + 0.01 * std::sin(static_cast<double>(i));
    }
    TrendSpec spec;
    spec.method = TrendMethod::AverageGrowth;
    spec.window_years = 10;
    auto cf1 = build_counterfactual(s, 1992, spec);
    GdpSeries scaled = s;
    for (double& v : scaled.values) v *= 3.5;
    auto cf2 = build_counterfactual(scaled, 1992, spec);
    CHECK(cf2.growth_rate == doctest::Approx(cf1.growth_rate).epsilon(1e-12));
    CHECK(cf2.level(1995) == doctest::Approx(3.5 * cf1.level(1995)).epsilon(1e-12));
}
