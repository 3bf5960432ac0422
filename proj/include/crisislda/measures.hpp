#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "crisislda/trend.hpp"
#include "crisislda/types.hpp"

namespace crisislda {

// The 13 loss measures. HP* pair HP-filtered trends with a 10-year cap;
// AG(w)(h)* pair average-growth trends over window w with an h-year cap;
// *perc ends on growth-rate recovery, *trend on trend-level recovery;
// ABS compares against the absolute pre-crisis GDP level.
enum class MeasureId {
    HP10perc,
    HP10trend,
    HP3perc,
    HP3trend,
    AG10_5perc,
    AG10_5trend,
    AG3_5perc,
    AG3_5trend,
    AG10_10perc,
    AG10_10trend,
    AG3_10perc,
    AG3_10trend,
    ABS,
};

inline constexpr std::array<MeasureId, 13> kAllMeasures = {
    MeasureId::HP10perc,    MeasureId::HP10trend,    MeasureId::HP3perc,
    MeasureId::HP3trend,    MeasureId::AG10_5perc,   MeasureId::AG10_5trend,
    MeasureId::AG3_5perc,   MeasureId::AG3_5trend,   MeasureId::AG10_10perc,
    MeasureId::AG10_10trend, MeasureId::AG3_10perc,  MeasureId::AG3_10trend,
    MeasureId::ABS,
};

enum class EndRule { GrowthRecovery, TrendRecovery, AbsoluteLevel };

struct MeasureSpec {
    MeasureId id;
    bool uses_counterfactual = true;
    TrendSpec trend;       // meaningful only when uses_counterfactual
    EndRule end_rule = EndRule::TrendRecovery;
    int cap_years = 10;
};

MeasureSpec measure_spec(MeasureId id);
std::string to_string(MeasureId id);
std::optional<MeasureId> parse_measure(const std::string& s);

enum class GapMode { Net, PositiveOnly };

struct LossOptions {
    GapMode gaps = GapMode::Net;
    double hp_smoothing = 100.0;
    HpScope hp_scope = HpScope::FullHistory;
    Anchor anchor = Anchor::Raw;
};

struct LossRecord {
    std::string country_id;
    int onset_year = 0;
    std::set<CrisisKind> kinds;
    bool twin = false;
    MeasureId measure;
    int duration_years = 1;
    bool recovered = false;
    double loss_fraction = 0.0;  // sum of gaps / pre-crisis GDP level (onset - 1)
    double loss_usd = 0.0;       // loss_fraction * GDP(onset - 1), constant 2005 USD
};

struct LossDiagnostics {
    int episodes_excluded_insufficient_history = 0;
    int episodes_not_contractionary = 0;
    std::vector<std::string> notes;
};

struct LossTable {
    std::vector<LossRecord> records;
    LossDiagnostics diagnostics;
};

bool is_contractionary(const CrisisEpisode& episode, const GdpSeries& series,
                       const MeasureSpec& measure, const LossOptions& opts = {});

struct CrisisEnd {
    int end_year = 0;
    bool recovered = false;
};

CrisisEnd crisis_end_year(const CrisisEpisode& episode, const GdpSeries& series,
                          const MeasureSpec& measure, const LossOptions& opts = {});

// truncate_before, when set, caps accumulation at that year (exclusive);
// a following crisis takes over losses from its own onset.
LossRecord compute_loss(const CrisisEpisode& episode, const GdpSeries& series,
                        const MeasureSpec& measure, const LossOptions& opts = {},
                        std::optional<int> truncate_before = std::nullopt);

// When a later episode of the same country starts before a record's end year,
// the record is truncated at that onset - 1 and recomputed; no GDP-year gap is
// counted twice under one measure.
std::vector<LossRecord> reassign_overlapping(const GdpPanel& panel,
                                             const std::vector<CrisisEpisode>& episodes,
                                             std::vector<LossRecord> records,
                                             const LossOptions& opts = {});

LossTable run_all_measures(const GdpPanel& panel, const std::vector<CrisisEpisode>& episodes,
                           const std::vector<MeasureId>& measures, const LossOptions& opts = {});

void write_loss_table(const LossTable& table, const std::string& path);
LossTable read_loss_table(const std::string& path);

}  // namespace crisislda
