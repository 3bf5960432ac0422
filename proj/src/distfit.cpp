#include "crisislda/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace crisislda {

namespace {

constexpr double kDropBelow = 1e-9;  // near-zero losses excluded from fitting
constexpr double kEulerGamma = 0.57721566490153286060651209;

double sample_mean(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double log_likelihood(const std::vector<double>& x, const SeverityDist& dist) {
    double ll = 0.0;
    for (double v : x) ll += dist.log_pdf(v);
    return ll;
}

// Probability-weighted moment starts for GPD. a1 weights each order statistic
// by its empirical survival probability.
void gpd_pwm_start(std::vector<double> x, double& xi, double& sigma) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a0 += x[i];
        a1 += x[i] * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
    }
    a0 /= static_cast<double>(n);
    a1 /= static_cast<double>(n);
    const double denom = a0 - 2.0 * a1;
    if (denom == 0.0) {
        xi = 0.1;
        sigma = a0;
        return;
    }
    xi = 2.0 - a0 / denom;  // xi = -k in the Hosking-Wallis parameterization
    sigma = 2.0 * a0 * a1 / denom;
    if (!(sigma > 0.0)) {
        xi = 0.1;
        sigma = a0;
    }
}

// PWM starts for GEV (Hosking, Wallis and Wood).
void gev_pwm_start(std::vector<double> x, double& xi, double& mu, double& sigma) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = static_cast<double>(i);
        const double nd = static_cast<double>(n);
        b0 += x[i];
        b1 += x[i] * pi / (nd - 1.0);
        b2 += x[i] * pi * (pi - 1.0) / ((nd - 1.0) * (nd - 2.0));
    }
    b0 /= static_cast<double>(n);
    b1 /= static_cast<double>(n);
    b2 /= static_cast<double>(n);
    const double c = (2.0 * b1 - b0) / (3.0 * b2 - b0) - std::log(2.0) / std::log(3.0);
    const double k = 7.8590 * c + 2.9554 * c * c;  // Hosking's approximation, k = -xi
    xi = -k;
    if (std::fabs(k) < 1e-8) {
        sigma = (2.0 * b1 - b0) / std::log(2.0);
        mu = b0 - kEulerGamma * sigma;
        return;
    }
    const double g = std::tgamma(1.0 + k);
    sigma = (2.0 * b1 - b0) * k / (g * (1.0 - std::pow(2.0, -k)));
    mu = b0 + sigma * (g - 1.0) / k;
    if (!(sigma > 0.0)) {
        sigma = b0 > 0.0 ? b0 : 1.0;
        mu = b0;
    }
}

// Derivative-free Nelder-Mead on negative log-likelihood. Infeasible points
// (data outside support, bad scale) get +inf.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double scale, int max_iter,
                                double tol) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += scale * (std::fabs(start[i]) > 1e-8 ? std::fabs(start[i]) : 1.0);
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    for (int it = 0; it < max_iter; ++it) {
        // order
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sx(n + 1);
        std::vector<double> sf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sx[i] = simplex[idx[i]];
            sf[i] = fv[idx[i]];
        }
        simplex = sx;
        fv = sf;
        if (std::fabs(fv[n] - fv[0]) < tol * (std::fabs(fv[0]) + tol)) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto point = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
            }
            return p;
        };
        auto xr = point(-1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = point(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            auto xc = point(0.5);
            const double fc = f(xc);
            if (fc < fv[n]) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    }
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (fv[i] < fv[best]) best = i;
    }
    return simplex[best];
}

FittedSeverityModel finish_fit(const std::vector<double>& x, SeverityDist dist) {
    FittedSeverityModel m;
    m.dist = std::move(dist);
    m.log_likelihood = log_likelihood(x, m.dist);
    const double k_params = static_cast<double>(m.dist.params.size());
    m.aic = 2.0 * k_params - 2.0 * m.log_likelihood;
    m.ks_statistic = ks_statistic(x, m.dist);
    m.converged = std::isfinite(m.log_likelihood);
    return m;
}

}  // namespace

double FrequencySample::mean() const {
    if (counts.empty()) return 0.0;
    double s = 0.0;
    for (int c : counts) s += c;
    return s / static_cast<double>(counts.size());
}

double FrequencySample::variance() const {
    if (counts.empty()) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (int c : counts) s += (c - m) * (c - m);
    return s / static_cast<double>(counts.size());
}

FrequencySample build_frequency_sample(const LossTable& table, MeasureId measure,
                                       int start_year, int end_year, int period_length) {
    if (period_length <= 0 || (end_year - start_year) % period_length != 0 ||
        end_year <= start_year) {
        throw ValidationError("build_frequency_sample: span must divide into whole periods");
    }
    FrequencySample sample;
    sample.period_length_years = period_length;
    sample.start_year = start_year;
    sample.counts.assign(static_cast<std::size_t>((end_year - start_year) / period_length), 0);
    for (const auto& r : table.records) {
        if (r.measure != measure) continue;
        if (r.onset_year < start_year || r.onset_year >= end_year) continue;
        ++sample.counts[static_cast<std::size_t>((r.onset_year - start_year) / period_length)];
    }
    return sample;
}

FittedFrequencyModel fit_poisson(const FrequencySample& sample) {
    if (sample.counts.empty()) throw ValidationError("EmptySample: no frequency counts");
    FittedFrequencyModel m;
    m.dist.family = FrequencyFamily::Poisson;
    m.dist.lambda = sample.mean();
    if (!(m.dist.lambda > 0.0)) throw ValidationError("EmptySample: all counts zero");
    m.log_likelihood = 0.0;
    for (int c : sample.counts) m.log_likelihood += m.dist.log_pmf(static_cast<unsigned>(c));
    return m;
}

FittedFrequencyModel fit_negbin(const FrequencySample& sample) {
    if (sample.counts.empty()) throw ValidationError("EmptySample: no frequency counts");
    const double mean = sample.mean();
    const double var = sample.variance();
    if (!(mean > 0.0)) throw ValidationError("EmptySample: all counts zero");

    FittedFrequencyModel m;
    m.dist.family = FrequencyFamily::NegativeBinomial;

    auto profile_ll = [&](double r) {
        const double p = r / (r + mean);  // closed-form given r: matches the sample mean
        FrequencyDist d{FrequencyFamily::NegativeBinomial, 0.0, r, p};
        double ll = 0.0;
        for (int c : sample.counts) ll += d.log_pmf(static_cast<unsigned>(c));
        return ll;
    };

    if (var <= mean) {
        // Poisson-degenerate: the profile likelihood increases in r without bound
        m.underdispersed_fallback = true;
        m.dist.r = 1e6;
        m.dist.p = m.dist.r / (m.dist.r + mean);
        m.log_likelihood = profile_ll(m.dist.r);
        return m;
    }

    // method-of-moments start, then golden-section on log r
    double r = mean * mean / (var - mean);
    double lo = std::log(r) - 8.0, hi = std::log(std::min(r * 1e4, 1e6));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = profile_ll(std::exp(x1)), f2 = profile_ll(std::exp(x2));
    double prev_best = std::max(f1, f2);
    for (int it = 0; it < 500; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = profile_ll(std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = profile_ll(std::exp(x1));
        }
        const double best = std::max(f1, f2);
        if (it > 10 && std::fabs(best - prev_best) < 1e-10) break;
        prev_best = best;
    }
    r = std::exp(0.5 * (lo + hi));
    m.dist.r = r;
    m.dist.p = r / (r + mean);
    m.log_likelihood = profile_ll(r);
    return m;
}

FittedSeverityModel fit_severity(const std::vector<double>& losses, SeverityFamily family) {
    std::vector<double> x;
    x.reserve(losses.size());
    int dropped = 0;
    for (double v : losses) {
        if (v < kDropBelow) {
            ++dropped;
            continue;
        }
        x.push_back(v);
    }
    if (x.size() < 10) {
        throw ValidationError("fit_severity needs >= 10 positive observations, got " +
                              std::to_string(x.size()));
    }

    const double mean = sample_mean(x);
    double log_sum = 0.0;
    for (double v : x) log_sum += std::log(v);
    const double mean_log = log_sum / static_cast<double>(x.size());

    FittedSeverityModel out;
    switch (family) {
        case SeverityFamily::Exponential: {
            out = finish_fit(x, {family, {mean}});
            break;
        }
        case SeverityFamily::LogNormal: {
            double ss = 0.0;
            for (double v : x) ss += (std::log(v) - mean_log) * (std::log(v) - mean_log);
            const double sigma = std::sqrt(ss / static_cast<double>(x.size()));
            if (!(sigma > 1e-12 * (std::fabs(mean_log) + 1.0))) {
                throw NumericalError("NonConvergence: degenerate sample for lognormal fit");
            }
            out = finish_fit(x, {family, {mean_log, sigma}});
            break;
        }
        case SeverityFamily::Gamma: {
            // Newton on ln(k) - psi(k) = s
            const double s = std::log(mean) - mean_log;
            if (!(s > 0.0)) {
                throw NumericalError("NonConvergence: degenerate sample for gamma fit");
            }
            double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
            bool ok = false;
            for (int it = 0; it < 10000; ++it) {
                const double f = std::log(k) - digamma(k) - s;
                const double df = 1.0 / k - trigamma(k);
                const double next = k - f / df;
                if (!(next > 0.0)) {
                    k = k / 2.0;
                    continue;
                }
                if (std::fabs(next - k) < 1e-12 * k) {
                    k = next;
                    ok = true;
                    break;
                }
                k = next;
            }
            if (!ok) throw NumericalError("NonConvergence: gamma shape iteration did not settle");
            out = finish_fit(x, {family, {k, mean / k}});
            break;
        }
        case SeverityFamily::Weibull: {
            // profile-likelihood Newton on the shape
            const std::size_t n = x.size();
            double k = 1.0;
            bool ok = false;
            for (int it = 0; it < 10000; ++it) {
                double swk = 0.0, swk_log = 0.0, swk_log2 = 0.0;
                for (double v : x) {
                    const double w = std::pow(v, k);
                    const double lv = std::log(v);
                    swk += w;
                    swk_log += w * lv;
                    swk_log2 += w * lv * lv;
                }
                const double f = swk_log / swk - 1.0 / k - mean_log;
                const double df = (swk_log2 * swk - swk_log * swk_log) / (swk * swk) + 1.0 / (k * k);
                const double next = k - f / df;
                if (!(next > 0.0) || !std::isfinite(next)) {
                    throw NumericalError("NonConvergence: weibull shape iteration diverged");
                }
                if (std::fabs(next - k) < 1e-12 * k) {
                    k = next;
                    ok = true;
                    break;
                }
                k = next;
            }
            if (!ok) throw NumericalError("NonConvergence: weibull shape iteration did not settle");
            double swk = 0.0;
            for (double v : x) swk += std::pow(v, k);
            const double lam = std::pow(swk / static_cast<double>(n), 1.0 / k);
            out = finish_fit(x, {family, {k, lam}});
            break;
        }
        case SeverityFamily::GeneralizedPareto: {
            double xi, sigma;
            gpd_pwm_start(x, xi, sigma);
            const double xmax = *std::max_element(x.begin(), x.end());
            auto feasible = [&](double xi_, double sigma_) {
                if (!(sigma_ > 0.0)) return false;
                if (xi_ < 0.0 && xmax >= -sigma_ / xi_) return false;
                return true;
            };
            if (!feasible(xi, sigma)) {
                xi = 0.1;
                double ss = 0.0;
                for (double v : x) ss += (v - mean) * (v - mean);
                sigma = std::sqrt(ss / static_cast<double>(x.size()));
                if (!feasible(xi, sigma)) {
                    throw NumericalError("SupportViolation: no feasible GPD start");
                }
            }
            auto neg_ll = [&](const std::vector<double>& p) {
                if (!feasible(p[0], p[1])) return std::numeric_limits<double>::infinity();
                SeverityDist d{family, {p[0], p[1]}};
                return -log_likelihood(x, d);
            };
            auto best = nelder_mead(neg_ll, {xi, sigma}, 0.1, 10000, 1e-12);
            out = finish_fit(x, {family, best});
            break;
        }
        case SeverityFamily::GEV: {
            double xi, mu, sigma;
            gev_pwm_start(x, xi, mu, sigma);
            auto feasible = [&](double xi_, double mu_, double sigma_) {
                if (!(sigma_ > 0.0)) return false;
                if (std::fabs(xi_) < 1e-12) return true;
                for (double v : x) {
                    if (1.0 + xi_ * (v - mu_) / sigma_ <= 0.0) return false;
                }
                return true;
            };
            if (!feasible(xi, mu, sigma)) {
                double ss = 0.0;
                for (double v : x) ss += (v - mean) * (v - mean);
                xi = 0.1;
                sigma = std::sqrt(ss / static_cast<double>(x.size()));
                mu = mean;
                if (!feasible(xi, mu, sigma)) {
                    throw NumericalError("SupportViolation: no feasible GEV start");
                }
            }
            auto neg_ll = [&](const std::vector<double>& p) {
                if (!feasible(p[0], p[1], p[2])) return std::numeric_limits<double>::infinity();
                SeverityDist d{family, {p[0], p[1], p[2]}};
                return -log_likelihood(x, d);
            };
            auto best = nelder_mead(neg_ll, {xi, mu, sigma}, 0.1, 10000, 1e-12);
            out = finish_fit(x, {family, best});
            break;
        }
    }
    if (dropped > 0) {
        out.note = std::to_string(dropped) + " near-zero observations dropped";
    }
    return out;
}

const FittedSeverityModel& select_severity_model(const std::vector<FittedSeverityModel>& fits,
                                                 SelectionPolicy policy) {
    if (fits.empty()) throw ValidationError("select_severity_model: no fits");
    if (policy == SelectionPolicy::WeibullBenchmark) {
        for (const auto& f : fits) {
            if (f.dist.family == SeverityFamily::Weibull && f.converged) return f;
        }
    }
    const FittedSeverityModel* best = nullptr;
    for (const auto& f : fits) {
        if (!f.converged) continue;
        if (!best || f.aic < best->aic) best = &f;
    }
    if (!best) throw ValidationError("select_severity_model: no converged fit");
    return *best;
}

MeanExcessCurve mean_excess(const std::vector<double>& losses,
                            const std::vector<double>& thresholds, int min_exceedances) {
    MeanExcessCurve curve;
    bool any = false;
    for (double u : thresholds) {
        double sum = 0.0;
        int n = 0;
        for (double v : losses) {
            if (v > u) {
                sum += v - u;
                ++n;
            }
        }
        if (n > 0) any = true;
        if (n < min_exceedances) continue;
        curve.thresholds.push_back(u);
        curve.mean_excess.push_back(sum / n);
        curve.exceedances.push_back(n);
    }
    if (!any) throw ValidationError("NoExceedances: every threshold is above the sample maximum");
    return curve;
}

double ks_statistic(std::vector<double> data, const SeverityDist& dist) {
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = dist.cdf(data[i]);
        d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

}  // namespace crisislda
