#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crisislda/lda.hpp"
#include "crisislda/measures.hpp"

namespace crisislda {

enum class GroupAxis { CrisisType, TwinType, Region, IncomeGroup, Period5y, All };

std::string to_string(GroupAxis a);
std::optional<GroupAxis> parse_group_axis(const std::string& s);

struct GroupCell {
    std::string group;
    MeasureId measure;
    int n = 0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct SeverityTable {
    GroupAxis axis = GroupAxis::All;
    std::vector<GroupCell> cells;
};

struct ReportConfig {
    double world_gdp_2005usd = 4.405e13;
    std::vector<double> percentiles = {0.5, 0.99, 0.999};
    std::string output_dir;
};

SeverityTable severity_table(const LossTable& table, const GdpPanel& panel,
                             const std::vector<MeasureId>& measures, GroupAxis axis,
                             int period_start_year = 1970, int period_length = 5);

std::string render_severity_table(const SeverityTable& table);
void write_severity_table_csv(const SeverityTable& table, const std::string& path);

// USD figure as a fraction of 2005 world GDP.
double to_world_gdp_share(double usd, const ReportConfig& config);

// Coverage at percentile q: percentile(q) minus the median.
double insurance_coverage(const RiskSummary& summary, double q);

void emit_mean_excess_csv(const MeanExcessCurve& curve, const std::string& path);
void emit_frequency_pmf_csv(const FittedFrequencyModel& poisson,
                            const FittedFrequencyModel& negbin, const std::string& path);
// Densities on a grid truncated at x_max (the comparison figure cuts at 1.5).
void emit_severity_density_csv(const std::vector<FittedSeverityModel>& fits,
                               double x_max, const std::string& path);
void emit_aggregate_histogram_csv(const AggregateLossDistribution& dist, int bins,
                                  const std::string& path);
void emit_histogram_svg(const std::vector<double>& values, int bins,
                        const std::string& title, const std::string& path);
void emit_curve_svg(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& title, const std::string& path);

struct FitResults {
    MeasureId measure = MeasureId::HP10trend;
    std::string unit = "usd";  // "usd" or "fraction"
    FittedFrequencyModel poisson;
    FittedFrequencyModel negbin;
    double freq_mean = 0.0;
    double freq_variance = 0.0;
    std::vector<FittedSeverityModel> severity_fits;
    SeverityFamily selected = SeverityFamily::Weibull;
};

FitResults fit_measure(const LossTable& table, MeasureId measure, const std::string& unit,
                       int freq_start_year, int freq_end_year,
                       SelectionPolicy policy = SelectionPolicy::WeibullBenchmark);

void write_fits_json(const FitResults& fits, const std::string& path);
FitResults read_fits_json(const std::string& path);

// lda.json stores the summary, seed, and generator version; the full sample
// optionally goes to a little-endian float64 sidecar next to it.
void write_lda_json(const RiskSummary& summary, const AggregateLossDistribution& dist,
                    const std::string& path, bool with_sample_sidecar = false);

struct PipelineConfig {
    std::string workspace;
    std::string output_dir;
    std::uint64_t seed = 42;
    std::size_t n_sims = 500000;
    MeasureId lda_measure = MeasureId::HP10trend;
    LossOptions loss_options;
    ReportConfig report;
    int freq_start_year = 1970;
    int freq_end_year = 2005;
    int n_workers = 1;
};

// Full deterministic run: losses -> fits -> lda -> reports, with a manifest
// recording the generator version, seed, and a hash of the configuration.
void run_pipeline(const PipelineConfig& config);

}  // namespace crisislda
