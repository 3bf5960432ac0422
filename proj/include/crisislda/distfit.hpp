#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crisislda/distributions.hpp"
#include "crisislda/measures.hpp"

namespace crisislda {

struct FrequencySample {
    int period_length_years = 5;
    int start_year = 0;
    std::vector<int> counts;  // one per contiguous period

    double mean() const;
    double variance() const;  // population variance
};

struct FittedFrequencyModel {
    FrequencyDist dist;
    double log_likelihood = 0.0;
    bool underdispersed_fallback = false;
};

struct FittedSeverityModel {
    SeverityDist dist;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double ks_statistic = 0.0;
    bool converged = true;
    std::string note;
};

// Counts of contractionary episodes (under one measure) whose onset falls in
// each period of [start_year, end_year).
FrequencySample build_frequency_sample(const LossTable& table, MeasureId measure,
                                       int start_year, int end_year,
                                       int period_length = 5);

FittedFrequencyModel fit_poisson(const FrequencySample& sample);

// Profile likelihood in r with p closed-form given r; method-of-moments start.
// Underdispersed samples fall back to r capped at 1e6 with a warning flag.
FittedFrequencyModel fit_negbin(const FrequencySample& sample);

FittedSeverityModel fit_severity(const std::vector<double>& losses, SeverityFamily family);

enum class SelectionPolicy { WeibullBenchmark, MinAic };

const FittedSeverityModel& select_severity_model(const std::vector<FittedSeverityModel>& fits,
                                                 SelectionPolicy policy = SelectionPolicy::WeibullBenchmark);

struct MeanExcessCurve {
    std::vector<double> thresholds;
    std::vector<double> mean_excess;
    std::vector<int> exceedances;
};

// Sample mean excess over each threshold; points with fewer than
// min_exceedances exceedances are dropped.
MeanExcessCurve mean_excess(const std::vector<double>& losses,
                            const std::vector<double>& thresholds,
                            int min_exceedances = 5);

double ks_statistic(std::vector<double> data, const SeverityDist& dist);

}  // namespace crisislda
