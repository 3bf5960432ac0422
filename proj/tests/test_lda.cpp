#include <doctest.h>

#include <cmath>
#include <numeric>

#include "crisislda/lda.hpp"

using namespace crisislda;

namespace {

FittedFrequencyModel poisson_model(double lambda) {
    FittedFrequencyModel m;
    m.dist = {FrequencyFamily::Poisson, lambda, 0.0, 0.0};
    return m;
}

FittedFrequencyModel negbin_model(double r, double p) {
    FittedFrequencyModel m;
    m.dist = {FrequencyFamily::NegativeBinomial, 0.0, r, p};
    return m;
}

FittedSeverityModel severity_model(SeverityFamily family, std::vector<double> params) {
    FittedSeverityModel m;
    m.dist = {family, std::move(params)};
    return m;
}

// n-fold convolution oracle: sum_n P(N=n) * pmf^{*n}, truncated at n_max.
std::vector<double> brute_force_compound(const FrequencyDist& freq,
                                         const std::vector<double>& sev_pmf,
                                         std::size_t out_len, unsigned n_max) {
    std::vector<double> out(out_len, 0.0);
    std::vector<double> conv(out_len, 0.0);
    conv[0] = 1.0;  // zero-fold convolution: point mass at 0
    out[0] += freq.pmf(0);
    for (unsigned n = 1; n <= n_max; ++n) {
        std::vector<double> next(out_len, 0.0);
        for (std::size_t i = 0; i < out_len; ++i) {
            if (conv[i] == 0.0) continue;
            for (std::size_t j = 0; j < sev_pmf.size() && i + j < out_len; ++j) {
                next[i + j] += conv[i] * sev_pmf[j];
            }
        }
        conv = std::move(next);
        const double pn = freq.pmf(n);
        for (std::size_t i = 0; i < out_len; ++i) out[i] += pn * conv[i];
    }
    return out;
}

}  // namespace

TEST_CASE("vanishing frequency yields an all-zero aggregate") {
    auto dist = simulate_aggregate(poisson_model(1e-12),
                                   severity_model(SeverityFamily::Exponential, {5.0}), 2000, 1);
    REQUIRE(dist.samples.size() == 2000);
    for (double s : dist.samples) CHECK(s == 0.0);
}

TEST_CASE("compound Poisson-exponential moments match theory") {
    // S with N ~ Poisson(4), X ~ Exp(mean 2): E[S] = 8, Var[S] = lambda E[X^2] = 32
    auto dist = simulate_aggregate(poisson_model(4.0),
                                   severity_model(SeverityFamily::Exponential, {2.0}),
                                   200000, 7, 4);
    auto s = risk_summary(dist);
    CHECK(std::fabs(s.mean - 8.0) / 8.0 < 0.01);
    const double var = s.stddev * s.stddev;
    CHECK(std::fabs(var - 32.0) / 32.0 < 0.02);
}

TEST_CASE("negative binomial aggregate matches its theoretical mean") {
    const double r = 2.0, p = 0.4;
    const double freq_mean = r * (1.0 - p) / p;  // 3
    auto dist = simulate_aggregate(negbin_model(r, p),
                                   severity_model(SeverityFamily::Weibull, {1.5, 2.0}),
                                   200000, 11, 2);
    SeverityDist wb{SeverityFamily::Weibull, {1.5, 2.0}};
    auto s = risk_summary(dist);
    const double expect = freq_mean * wb.mean();
    CHECK(std::fabs(s.mean - expect) / expect < 0.02);
}

TEST_CASE("samples are bitwise identical across worker counts") {
    auto freq = negbin_model(1.2, 0.3);
    auto sev = severity_model(SeverityFamily::Gamma, {1.7, 2.5});
    auto one = simulate_aggregate(freq, sev, 10000, 123, 1);
    auto four = simulate_aggregate(freq, sev, 10000, 123, 4);
    auto eight = simulate_aggregate(freq, sev, 10000, 123, 8);
    REQUIRE(one.samples.size() == four.samples.size());
    for (std::size_t i = 0; i < one.samples.size(); ++i) {
        CHECK(one.samples[i] == four.samples[i]);
        CHECK(one.samples[i] == eight.samples[i]);
    }
    auto other_seed = simulate_aggregate(freq, sev, 10000, 124, 1);
    CHECK(one.samples != other_seed.samples);
}

TEST_CASE("quantiles rise with the frequency mean") {
    auto sev = severity_model(SeverityFamily::Exponential, {1.0});
    auto lo = risk_summary(simulate_aggregate(poisson_model(1.0), sev, 50000, 5));
    auto hi = risk_summary(simulate_aggregate(poisson_model(4.0), sev, 50000, 5));
    for (double q : {0.5, 0.99, 0.999}) {
        CHECK(hi.percentiles.at(q) > lo.percentiles.at(q));
    }
}

TEST_CASE("nearest-rank percentile of 1..100 at q=0.99 is 99") {
    AggregateLossDistribution dist;
    for (int i = 100; i >= 1; --i) dist.samples.push_back(static_cast<double>(i));
    dist.n_sims = 100;
    auto s = risk_summary(dist, {0.5, 0.99});
    CHECK(s.percentiles.at(0.99) == 99.0);
    CHECK(s.percentiles.at(0.5) == 50.0);
}

TEST_CASE("constant samples give degenerate summaries") {
    AggregateLossDistribution dist;
    dist.samples.assign(1000, 3.25);
    dist.n_sims = 1000;
    auto s = risk_summary(dist);
    CHECK(s.mean == 3.25);
    CHECK(s.stddev == 0.0);
    for (const auto& [q, v] : s.percentiles) CHECK(v == 3.25);
}

TEST_CASE("risk_summary rejects empty sample sets") {
    AggregateLossDistribution dist;
    CHECK_THROWS_AS(risk_summary(dist), ValidationError);
}

TEST_CASE("panjer with a unit point-mass severity reproduces the frequency pmf") {
    FrequencyDist pois{FrequencyFamily::Poisson, 3.0, 0.0, 0.0};
    std::vector<double> point_mass = {0.0, 1.0};  // all severity mass at one step
    auto compound = panjer_compound_discrete(pois, point_mass, 1.0);
    for (std::size_t k = 0; k < 20 && k < compound.pmf.size(); ++k) {
        CHECK(compound.pmf[k] ==
              doctest::Approx(pois.pmf(static_cast<unsigned>(k))).epsilon(1e-10));
    }
}

TEST_CASE("panjer matches brute-force convolution for Poisson and NegBin") {
    std::vector<double> sev_pmf = {0.05, 0.3, 0.25, 0.2, 0.12, 0.08};
    for (FrequencyDist freq : {FrequencyDist{FrequencyFamily::Poisson, 2.5, 0.0, 0.0},
                               FrequencyDist{FrequencyFamily::NegativeBinomial, 0.0, 1.8, 0.45}}) {
        auto compound = panjer_compound_discrete(freq, sev_pmf, 1.0);
        auto oracle = brute_force_compound(freq, sev_pmf, 200, 50);
        // the recursion stops once 1 - 1e-9 of mass is reached; beyond its
        // support the oracle pmf must itself be negligible
        for (std::size_t k = 0; k < 100; ++k) {
            const double got = k < compound.pmf.size() ? compound.pmf[k] : 0.0;
            CHECK(std::fabs(got - oracle[k]) < 1e-8);
        }
        // total mass accumulates to ~1
        const double mass = std::accumulate(compound.pmf.begin(), compound.pmf.end(), 0.0);
        CHECK(mass > 1.0 - 1e-6);
        CHECK(mass < 1.0 + 1e-9);
    }
}

TEST_CASE("panjer compound mean equals frequency mean times severity mean") {
    FrequencyDist freq{FrequencyFamily::NegativeBinomial, 0.0, 2.0, 0.5};
    SeverityDist sev{SeverityFamily::Gamma, {2.0, 1.5}};
    auto compound = panjer_compound(freq, sev, 0.01);
    double mean = 0.0;
    for (std::size_t k = 0; k < compound.pmf.size(); ++k) {
        mean += static_cast<double>(k) * compound.step * compound.pmf[k];
    }
    const double expect = freq.mean() * sev.mean();
    CHECK(std::fabs(mean - expect) / expect < 1e-3);
}

TEST_CASE("panjer rejects a discretization step that is too coarse") {
    FrequencyDist freq{FrequencyFamily::Poisson, 2.0, 0.0, 0.0};
    SeverityDist sev{SeverityFamily::Exponential, {0.05}};
    CHECK_THROWS_WITH_AS(panjer_compound(freq, sev, 1.0),
                         doctest::Contains("StepTooCoarse"), ValidationError);
}

TEST_CASE("panjer cdf brackets the Monte Carlo distribution (small KS)") {
    FrequencyDist pois{FrequencyFamily::Poisson, 2.0, 0.0, 0.0};
    SeverityDist exp_sev{SeverityFamily::Exponential, {1.0}};
    auto compound = panjer_compound(pois, exp_sev, 0.01);
    auto mc = simulate_aggregate(poisson_model(2.0),
                                 severity_model(SeverityFamily::Exponential, {1.0}), 100000, 99, 4);
    // evaluate the sup distance at lattice-cell midpoints: both CDFs are flat
    // there, which sidesteps the atom the discretization places at zero
    std::vector<double> sorted = mc.samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    double cum = 0.0;
    for (std::size_t k = 0; k < compound.pmf.size(); ++k) {
        cum += compound.pmf[k];
        const double x = (static_cast<double>(k) + 0.5) * compound.step;
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        const double emp = static_cast<double>(it - sorted.begin()) / n;
        ks = std::max(ks, std::fabs(emp - cum));
    }
    CHECK(ks < 0.01);
}

TEST_CASE("discretize_severity conserves mass and the mean") {
    SeverityDist sev{SeverityFamily::Weibull, {1.3, 2.0}};
    const double step = 0.005;
    auto pmf = discretize_severity(sev, step, 1 << 20);
    const double mass = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    CHECK(mass > 1.0 - 1e-9);
    double mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) mean += static_cast<double>(k) * step * pmf[k];
    CHECK(std::fabs(mean - sev.mean()) / sev.mean() < 1e-3);
}
