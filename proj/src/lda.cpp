#include "crisislda/lda.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace crisislda {

namespace {

// Counter-based stream: each replication derives its own state from
// (seed, replication index), so partitioning across workers cannot change the
// draws.
struct SplitMixStream {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    SplitMixStream(std::uint64_t seed, std::uint64_t replication)
        : state(mix(seed ^ mix(replication))) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform strictly inside (0, 1)
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
};

unsigned draw_poisson(SplitMixStream& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    // inversion by sequential search
    const double u = rng.next_uniform();
    double p = std::exp(-lambda);
    if (p == 0.0) {
        // extremely large rate: normal approximation keeps the draw finite
        const double z = normal_quantile(rng.next_uniform());
        const double v = lambda + std::sqrt(lambda) * z;
        return v < 0.0 ? 0u : static_cast<unsigned>(std::lround(v));
    }
    double cum = p;
    unsigned n = 0;
    while (u > cum && n < 100000000u) {
        ++n;
        p *= lambda / n;
        cum += p;
    }
    return n;
}

unsigned draw_frequency(SplitMixStream& rng, const FrequencyDist& freq) {
    if (freq.family == FrequencyFamily::Poisson) return draw_poisson(rng, freq.lambda);
    // gamma-Poisson mixture, gamma drawn by inverse CDF
    const double scale = (1.0 - freq.p) / freq.p;
    const double g = scale * gamma_p_inv(freq.r, rng.next_uniform());
    return draw_poisson(rng, g);
}

}  // namespace

AggregateLossDistribution simulate_aggregate(const FittedFrequencyModel& freq,
                                             const FittedSeverityModel& sev,
                                             std::size_t n_sims, std::uint64_t seed,
                                             int n_workers) {
    if (n_sims < 1) throw ValidationError("simulate_aggregate: n_sims must be >= 1");
    if (n_workers < 1) n_workers = 1;

    AggregateLossDistribution out;
    out.samples.assign(n_sims, 0.0);
    out.seed = seed;
    out.n_sims = n_sims;

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SplitMixStream rng(seed, i);
            const unsigned n = draw_frequency(rng, freq.dist);
            double total = 0.0;
            for (unsigned k = 0; k < n; ++k) {
                total += sev.dist.quantile(rng.next_uniform());
            }
            out.samples[i] = total;
        }
    };

    if (n_workers == 1) {
        worker(0, n_sims);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (n_sims + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            if (begin >= n_sims) break;
            threads.emplace_back(worker, begin, std::min(begin + chunk, n_sims));
        }
        for (auto& t : threads) t.join();
    }
    return out;
}

RiskSummary risk_summary(const AggregateLossDistribution& dist,
                         const std::vector<double>& percentiles, QuantileMethod method) {
    if (dist.samples.empty()) throw ValidationError("risk_summary: empty sample");
    std::vector<double> sorted = dist.samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    RiskSummary s;
    for (double q : percentiles) {
        if (q < 0.0 || q > 1.0) throw ValidationError("risk_summary: percentile outside [0,1]");
        double v;
        if (method == QuantileMethod::NearestRank) {
            const std::size_t rank =
                q <= 0.0 ? 1 : static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
            v = sorted[std::min(rank, n) - 1];
        } else {
            const double pos = q * static_cast<double>(n - 1);
            const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
            const double frac = pos - static_cast<double>(lo);
            v = lo + 1 < n ? sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac : sorted[lo];
        }
        s.percentiles[q] = v;
    }
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    s.mean = mean;
    s.stddev = std::sqrt(var);
    return s;
}

double DiscretizedCompound::cdf_at(double x) const {
    if (x < 0.0) return 0.0;
    const std::size_t idx = static_cast<std::size_t>(std::floor(x / step));
    double cum = 0.0;
    for (std::size_t j = 0; j < pmf.size() && j <= idx; ++j) cum += pmf[j];
    return std::min(cum, 1.0);
}

std::vector<double> discretize_severity(const SeverityDist& sev, double step,
                                        std::size_t max_points) {
    if (!(step > 0.0)) throw ValidationError("discretize_severity: step must be positive");
    std::vector<double> f;
    f.reserve(1024);
    double prev = sev.cdf(0.5 * step);
    f.push_back(prev);
    while (f.size() < max_points) {
        const double hi = sev.cdf((static_cast<double>(f.size()) + 0.5) * step);
        f.push_back(hi - prev);
        prev = hi;
        if (1.0 - hi < 1e-12) break;
    }
    return f;
}

DiscretizedCompound panjer_compound_discrete(const FrequencyDist& freq,
                                             const std::vector<double>& severity_pmf,
                                             double step, double max_mass) {
    if (severity_pmf.empty()) throw ValidationError("panjer: empty severity pmf");
    double a, b, g0;
    const double f0 = severity_pmf[0];
    if (freq.family == FrequencyFamily::Poisson) {
        a = 0.0;
        b = freq.lambda;
        g0 = std::exp(freq.lambda * (f0 - 1.0));
    } else {
        a = 1.0 - freq.p;
        b = (freq.r - 1.0) * (1.0 - freq.p);
        g0 = std::pow(freq.p / (1.0 - (1.0 - freq.p) * f0), freq.r);
    }

    DiscretizedCompound out;
    out.step = step;
    out.pmf.push_back(g0);
    double mass = g0;
    const std::size_t m = severity_pmf.size();
    const std::size_t cap = 1u << 22;
    while (mass < max_mass) {
        const std::size_t s = out.pmf.size();
        if (s > cap) throw NumericalError("panjer: pmf support exceeds cap before reaching mass");
        double acc = 0.0;
        const std::size_t jmax = std::min(s, m - 1);
        for (std::size_t j = 1; j <= jmax; ++j) {
            acc += (a + b * static_cast<double>(j) / static_cast<double>(s)) * severity_pmf[j] *
                   out.pmf[s - j];
        }
        const double gs = acc / (1.0 - a * f0);
        out.pmf.push_back(gs);
        mass += gs;
    }
    return out;
}

DiscretizedCompound panjer_compound(const FrequencyDist& freq, const SeverityDist& sev,
                                    double step, double max_mass) {
    const std::vector<double> f = discretize_severity(sev, step, 1u << 22);
    // discretization sanity: the lattice mean must stay within 0.1% of the
    // continuous severity mean
    double disc_mean = 0.0, disc_mass = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        disc_mean += static_cast<double>(j) * step * f[j];
        disc_mass += f[j];
    }
    const double cont_mean = sev.mean();
    if (std::isfinite(cont_mean) && cont_mean > 0.0) {
        if (std::fabs(disc_mean - cont_mean) > 1e-3 * cont_mean || disc_mass < 1.0 - 1e-6) {
            throw ValidationError("StepTooCoarse: discretization shifts the severity mean by more "
                                  "than 0.1%");
        }
    }
    return panjer_compound_discrete(freq, f, step, max_mass);
}

}  // namespace crisislda
