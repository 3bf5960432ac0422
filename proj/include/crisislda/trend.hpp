#pragma once

#include <vector>

#include "crisislda/types.hpp"

namespace crisislda {

enum class TrendMethod { HpFiltered, AverageGrowth };

// How the pre-onset series is prepared before HP filtering, and where the
// counterfactual is anchored. The window-only / filtered-anchor variants are
// sensitivity alternatives; full-history filtering on raw onset GDP is the
// default.
enum class HpScope { FullHistory, WindowOnly };
enum class Anchor { Raw, Filtered };

struct TrendSpec {
    TrendMethod method = TrendMethod::AverageGrowth;
    int window_years = 10;             // 3 or 10
    double smoothing = 100.0;          // HP penalty, annual-data convention
    HpScope hp_scope = HpScope::FullHistory;
    Anchor anchor = Anchor::Raw;
};

struct Counterfactual {
    int onset_year = 0;
    double base_level = 0.0;    // GDP level at onset_year - 1
    double growth_rate = 1.0;   // gross per-year factor

    // Counterfactual level for year onset_year + k - 1 is base * rate^k.
    double level(int year) const;
};

// Trend component minimizing sum (y - t)^2 + smoothing * sum (d2 t)^2,
// solved exactly through the pentadiagonal normal equations.
std::vector<double> hp_filter(const std::vector<double>& series, double smoothing);

// Geometric mean of annual growth over the window ending at onset_year - 1.
// For HpFiltered the filter runs on log GDP truncated at onset_year - 1.
// Throws ValidationError when the series does not cover the window.
double precrisis_growth(const GdpSeries& series, int onset_year, const TrendSpec& spec);

Counterfactual build_counterfactual(const GdpSeries& series, int onset_year,
                                    const TrendSpec& spec);

}  // namespace crisislda
