#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "crisislda/distfit.hpp"

namespace crisislda {

// Bumped whenever the replication-stream layout or samplers change; recorded
// in output metadata so stored summaries stay attributable.
inline constexpr const char* kGeneratorVersion = "splitmix64-streams-1";

enum class QuantileMethod { NearestRank, Interpolated };

struct AggregateLossDistribution {
    std::vector<double> samples;  // one per simulated 5-year period
    std::uint64_t seed = 0;
    std::size_t n_sims = 0;
};

struct RiskSummary {
    std::map<double, double> percentiles;
    double mean = 0.0;
    double stddev = 0.0;  // population
};

// Draw n from the frequency model, then n severities, then sum. Replication i
// uses its own counter-based stream keyed by (seed, i), so results are
// identical for any worker count.
AggregateLossDistribution simulate_aggregate(const FittedFrequencyModel& freq,
                                             const FittedSeverityModel& sev,
                                             std::size_t n_sims, std::uint64_t seed,
                                             int n_workers = 1);

RiskSummary risk_summary(const AggregateLossDistribution& dist,
                         const std::vector<double>& percentiles = {0.5, 0.99, 0.999},
                         QuantileMethod method = QuantileMethod::NearestRank);

struct DiscretizedCompound {
    double step = 0.0;
    std::vector<double> pmf;

    double cdf_at(double x) const;
};

// Rounding-method discretization of the severity at the given step.
std::vector<double> discretize_severity(const SeverityDist& sev, double step,
                                        std::size_t max_points);

// Exact (a,b,0) recursion for the compound pmf, accumulated until mass
// reaches max_mass. Throws ValidationError when the discretization shifts the
// severity mean by more than 0.1%.
DiscretizedCompound panjer_compound(const FrequencyDist& freq, const SeverityDist& sev,
                                    double step, double max_mass = 1.0 - 1e-9);

DiscretizedCompound panjer_compound_discrete(const FrequencyDist& freq,
                                             const std::vector<double>& severity_pmf,
                                             double step, double max_mass = 1.0 - 1e-9);

}  // namespace crisislda
