#include "crisislda/trend.hpp"

#include <cmath>

namespace crisislda {

namespace {

// Solve the pentadiagonal SPD system (I + smoothing * D'D) tau = y by banded
// Cholesky, bandwidth 2. D is the (n-2) x n second-difference operator.
std::vector<double> solve_hp_system(const std::vector<double>& y, double lam) {
    const std::size_t n = y.size();
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0, 0.0), f(n > 2 ? n - 2 : 0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 1.0;
        if (i >= 2 && i + 2 < n) diag += 6.0 * lam;
        else if ((i == 1 && n >= 4) || (i == n - 2 && n >= 4)) diag += 5.0 * lam;
        else if (i == 0 || i == n - 1) diag += 1.0 * lam;
        else diag += 5.0 * lam;  // n < 4 never reaches here (guarded by caller)
        d[i] = diag;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        e[i] = (i == 0 || i == n - 2) ? -2.0 * lam : -4.0 * lam;
    }
    for (std::size_t i = 0; i + 2 < n; ++i) f[i] = lam;

    // L has unit band structure: l1[i] below-diagonal, l2[i] second below.
    std::vector<double> ld(n), l1(n > 1 ? n - 1 : 0, 0.0), l2(n > 2 ? n - 2 : 0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = d[i];
        if (i >= 1) sum -= l1[i - 1] * l1[i - 1];
        if (i >= 2) sum -= l2[i - 2] * l2[i - 2];
        ld[i] = std::sqrt(sum);
        if (i + 1 < n) {
            double s1 = e[i];
            if (i >= 1) s1 -= l1[i - 1] * l2[i - 1];
            l1[i] = s1 / ld[i];
        }
        if (i + 2 < n) l2[i] = f[i] / ld[i];
    }
    auto solve = [&](const std::vector<double>& rhs) {
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[i];
            if (i >= 1) s -= l1[i - 1] * z[i - 1];
            if (i >= 2) s -= l2[i - 2] * z[i - 2];
            z[i] = s / ld[i];
        }
        std::vector<double> x(n);
        for (std::size_t k = n; k-- > 0;) {
            double s = z[k];
            if (k + 1 < n) s -= l1[k] * x[k + 1];
            if (k + 2 < n) s -= l2[k] * x[k + 2];
            x[k] = s / ld[k];
        }
        return x;
    };
    auto residual = [&](const std::vector<double>& x) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ax = d[i] * x[i];
            if (i >= 1) ax += e[i - 1] * x[i - 1];
            if (i + 1 < n) ax += e[i] * x[i + 1];
            if (i >= 2) ax += f[i - 2] * x[i - 2];
            if (i + 2 < n) ax += f[i] * x[i + 2];
            r[i] = y[i] - ax;
        }
        return r;
    };

    std::vector<double> tau = solve(y);
    // two steps of iterative refinement keep the residual near machine level
    for (int pass = 0; pass < 2; ++pass) {
        const std::vector<double> r = residual(tau);
        const std::vector<double> corr = solve(r);
        for (std::size_t i = 0; i < n; ++i) tau[i] += corr[i];
    }

    // residual check, tolerance scaled by the matrix norm (~1 + 16*lam)
    double res2 = 0.0, ynorm2 = 0.0, taunorm2 = 0.0;
    const std::vector<double> r = residual(tau);
    for (std::size_t i = 0; i < n; ++i) {
        res2 += r[i] * r[i];
        ynorm2 += y[i] * y[i];
        taunorm2 += tau[i] * tau[i];
    }
    const double scale = std::sqrt(ynorm2) + (1.0 + 16.0 * lam) * std::sqrt(taunorm2);
    if (std::sqrt(res2) > 1e-12 * scale + 1e-300) {
        throw NumericalError("hp_filter: residual exceeds tolerance");
    }
    return tau;
}

}  // namespace

double Counterfactual::level(int year) const {
    const int k = year - onset_year + 1;
    return base_level * std::pow(growth_rate, k);
}

std::vector<double> hp_filter(const std::vector<double>& series, double smoothing) {
    if (series.size() < 4) throw ValidationError("SeriesTooShort: hp_filter needs >= 4 points");
    if (!(smoothing > 0.0)) throw ValidationError("hp_filter: smoothing must be positive");
    return solve_hp_system(series, smoothing);
}

double precrisis_growth(const GdpSeries& series, int onset_year, const TrendSpec& spec) {
    const int w = spec.window_years;
    if (!series.covers(onset_year - w - 1) || !series.covers(onset_year - 1)) {
        throw ValidationError("InsufficientHistory: " + series.country_id + " onset " +
                              std::to_string(onset_year) + " window " + std::to_string(w));
    }
    if (spec.method == TrendMethod::AverageGrowth) {
        const double g0 = series.at(onset_year - w - 1);
        const double g1 = series.at(onset_year - 1);
        return std::pow(g1 / g0, 1.0 / w);
    }
    // HpFiltered: filter log GDP truncated at onset_year - 1, then average the
    // filtered growth geometrically over the window.
    const int start = spec.hp_scope == HpScope::FullHistory
                          ? series.first_year
                          : onset_year - w - 1;
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(onset_year - start));
    for (int y = start; y <= onset_year - 1; ++y) logs.push_back(std::log(series.at(y)));
    if (logs.size() < 4) {
        throw ValidationError("InsufficientHistory: " + series.country_id +
                              " has too short a pre-onset history for HP filtering");
    }
    const std::vector<double> tau = hp_filter(logs, spec.smoothing);
    const std::size_t i1 = tau.size() - 1;                           // onset - 1
    const std::size_t i0 = i1 - static_cast<std::size_t>(w);         // onset - w - 1
    return std::exp((tau[i1] - tau[i0]) / w);
}

Counterfactual build_counterfactual(const GdpSeries& series, int onset_year,
                                    const TrendSpec& spec) {
    Counterfactual cf;
    cf.onset_year = onset_year;
    cf.growth_rate = precrisis_growth(series, onset_year, spec);
    if (spec.anchor == Anchor::Filtered && spec.method == TrendMethod::HpFiltered) {
        const int start = spec.hp_scope == HpScope::FullHistory
                              ? series.first_year
                              : onset_year - spec.window_years - 1;
        std::vector<double> logs;
        for (int y = start; y <= onset_year - 1; ++y) logs.push_back(std::log(series.at(y)));
        cf.base_level = std::exp(hp_filter(logs, spec.smoothing).back());
    } else {
        cf.base_level = series.at(onset_year - 1);
    }
    return cf;
}

}  // namespace crisislda
