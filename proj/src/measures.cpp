#include "crisislda/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace crisislda {

MeasureSpec measure_spec(MeasureId id) {
    MeasureSpec s;
    s.id = id;
    auto hp = [&](int window, EndRule rule) {
        s.trend.method = TrendMethod::HpFiltered;
        s.trend.window_years = window;
        s.end_rule = rule;
        s.cap_years = 10;  // HP losses accumulate over at most ten years
    };
    auto ag = [&](int window, int cap, EndRule rule) {
        s.trend.method = TrendMethod::AverageGrowth;
        s.trend.window_years = window;
        s.end_rule = rule;
        s.cap_years = cap;
    };
    switch (id) {
        case MeasureId::HP10perc: hp(10, EndRule::GrowthRecovery); break;
        case MeasureId::HP10trend: hp(10, EndRule::TrendRecovery); break;
        case MeasureId::HP3perc: hp(3, EndRule::GrowthRecovery); break;
        case MeasureId::HP3trend: hp(3, EndRule::TrendRecovery); break;
        case MeasureId::AG10_5perc: ag(10, 5, EndRule::GrowthRecovery); break;
        case MeasureId::AG10_5trend: ag(10, 5, EndRule::TrendRecovery); break;
        case MeasureId::AG3_5perc: ag(3, 5, EndRule::GrowthRecovery); break;
        case MeasureId::AG3_5trend: ag(3, 5, EndRule::TrendRecovery); break;
        case MeasureId::AG10_10perc: ag(10, 10, EndRule::GrowthRecovery); break;
        case MeasureId::AG10_10trend: ag(10, 10, EndRule::TrendRecovery); break;
        case MeasureId::AG3_10perc: ag(3, 10, EndRule::GrowthRecovery); break;
        case MeasureId::AG3_10trend: ag(3, 10, EndRule::TrendRecovery); break;
        case MeasureId::ABS:
            s.uses_counterfactual = false;
            s.end_rule = EndRule::AbsoluteLevel;
            s.cap_years = 10;
            break;
    }
    return s;
}

std::string to_string(MeasureId id) {
    switch (id) {
        case MeasureId::HP10perc: return "HP10perc";
        case MeasureId::HP10trend: return "HP10trend";
        case MeasureId::HP3perc: return "HP3perc";
        case MeasureId::HP3trend: return "HP3trend";
        case MeasureId::AG10_5perc: return "AG10_5perc";
        case MeasureId::AG10_5trend: return "AG10_5trend";
        case MeasureId::AG3_5perc: return "AG3_5perc";
        case MeasureId::AG3_5trend: return "AG3_5trend";
        case MeasureId::AG10_10perc: return "AG10_10perc";
        case MeasureId::AG10_10trend: return "AG10_10trend";
        case MeasureId::AG3_10perc: return "AG3_10perc";
        case MeasureId::AG3_10trend: return "AG3_10trend";
        case MeasureId::ABS: return "ABS";
    }
    return "?";
}

std::optional<MeasureId> parse_measure(const std::string& s) {
    for (MeasureId id : kAllMeasures) {
        if (to_string(id) == s) return id;
    }
    return std::nullopt;
}

namespace {

TrendSpec effective_trend(const MeasureSpec& measure, const LossOptions& opts) {
    TrendSpec t = measure.trend;
    t.smoothing = opts.hp_smoothing;
    t.hp_scope = opts.hp_scope;
    t.anchor = opts.anchor;
    return t;
}

constexpr double kGrowthTieTol = 1e-12;

}  // namespace

bool is_contractionary(const CrisisEpisode& episode, const GdpSeries& series,
                       const MeasureSpec& measure, const LossOptions& opts) {
    const int onset = episode.start_year;
    if (!series.covers(onset) || !series.covers(onset - 1)) {
        throw ValidationError("InsufficientHistory: " + episode.country_id + " onset " +
                              std::to_string(onset));
    }
    if (!measure.uses_counterfactual) {
        return series.at(onset) < series.at(onset - 1);
    }
    const Counterfactual cf =
        build_counterfactual(series, onset, effective_trend(measure, opts));
    return series.at(onset) < cf.level(onset);
}

CrisisEnd crisis_end_year(const CrisisEpisode& episode, const GdpSeries& series,
                          const MeasureSpec& measure, const LossOptions& opts) {
    const int onset = episode.start_year;
    const int cap_end = onset + measure.cap_years - 1;
    const int last = std::min(cap_end, series.last_year());

    Counterfactual cf;
    if (measure.uses_counterfactual) {
        cf = build_counterfactual(series, onset, effective_trend(measure, opts));
    }
    const double pre_level = series.at(onset - 1);

    for (int y = onset; y <= last; ++y) {
        bool done = false;
        switch (measure.end_rule) {
            case EndRule::TrendRecovery:
                done = series.at(y) >= cf.level(y);
                break;
            case EndRule::GrowthRecovery:
                done = series.at(y) / series.at(y - 1) >= cf.growth_rate - kGrowthTieTol;
                break;
            case EndRule::AbsoluteLevel:
                done = series.at(y) >= pre_level;
                break;
        }
        if (done) return {y, true};
    }
    return {last, false};
}

LossRecord compute_loss(const CrisisEpisode& episode, const GdpSeries& series,
                        const MeasureSpec& measure, const LossOptions& opts,
                        std::optional<int> truncate_before) {
    const int onset = episode.start_year;
    const CrisisEnd end = crisis_end_year(episode, series, measure, opts);
    int acc_end = end.end_year;
    bool recovered = end.recovered;
    if (truncate_before && *truncate_before - 1 < acc_end) {
        acc_end = *truncate_before - 1;
        recovered = false;
    }

    Counterfactual cf;
    if (measure.uses_counterfactual) {
        cf = build_counterfactual(series, onset, effective_trend(measure, opts));
    }
    const double pre_level = series.at(onset - 1);

    double gap_sum = 0.0;
    for (int y = onset; y <= acc_end; ++y) {
        double gap;
        if (measure.uses_counterfactual) {
            gap = cf.level(y) - series.at(y);
            if (opts.gaps == GapMode::PositiveOnly && gap < 0.0) gap = 0.0;
        } else {
            // ABS counts only years below the pre-crisis level
            gap = std::max(pre_level - series.at(y), 0.0);
        }
        gap_sum += gap;
    }
    gap_sum = std::max(gap_sum, 0.0);

    LossRecord rec;
    rec.country_id = episode.country_id;
    rec.onset_year = onset;
    rec.kinds = episode.kinds;
    rec.twin = episode.twin();
    rec.measure = measure.id;
    rec.duration_years = acc_end - onset + 1;
    rec.recovered = recovered;
    // Normalized by the pre-crisis GDP level (the counterfactual base), so the
    // canonical flat-base dip fixture yields exactly sum-of-gaps / base.
    const double base_gdp = series.at(onset - 1);
    rec.loss_fraction = gap_sum / base_gdp;
    rec.loss_usd = rec.loss_fraction * base_gdp;
    return rec;
}

std::vector<LossRecord> reassign_overlapping(const GdpPanel& panel,
                                             const std::vector<CrisisEpisode>& episodes,
                                             std::vector<LossRecord> records,
                                             const LossOptions& opts) {
    // next episode onset per (country, onset)
    std::map<std::pair<std::string, int>, int> next_onset;
    std::map<std::pair<std::string, int>, const CrisisEpisode*> by_key;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto& e = episodes[i];
        by_key[{e.country_id, e.start_year}] = &e;
        if (i + 1 < episodes.size() && episodes[i + 1].country_id == e.country_id) {
            next_onset[{e.country_id, e.start_year}] = episodes[i + 1].start_year;
        }
    }
    for (auto& rec : records) {
        auto it = next_onset.find({rec.country_id, rec.onset_year});
        if (it == next_onset.end()) continue;
        const int boundary = it->second;
        if (boundary > rec.onset_year + rec.duration_years - 1) continue;  // no overlap
        const GdpSeries* series = panel.find(rec.country_id);
        const CrisisEpisode* ep = by_key[{rec.country_id, rec.onset_year}];
        rec = compute_loss(*ep, *series, measure_spec(rec.measure), opts, boundary);
    }
    return records;
}

LossTable run_all_measures(const GdpPanel& panel, const std::vector<CrisisEpisode>& episodes,
                           const std::vector<MeasureId>& measures, const LossOptions& opts) {
    std::vector<CrisisEpisode> sorted = episodes;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(a.country_id, a.start_year) < std::tie(b.country_id, b.start_year);
    });

    LossTable table;
    for (MeasureId id : measures) {
        const MeasureSpec spec = measure_spec(id);
        std::vector<LossRecord> records;
        for (const auto& ep : sorted) {
            const GdpSeries* series = panel.find(ep.country_id);
            if (!series) {
                ++table.diagnostics.episodes_excluded_insufficient_history;
                continue;
            }
            try {
                if (!is_contractionary(ep, *series, spec, opts)) {
                    ++table.diagnostics.episodes_not_contractionary;
                    continue;
                }
                records.push_back(compute_loss(ep, *series, spec, opts));
            } catch (const ValidationError& e) {
                ++table.diagnostics.episodes_excluded_insufficient_history;
                table.diagnostics.notes.push_back(to_string(id) + ": " + e.what());
            }
        }
        records = reassign_overlapping(panel, sorted, std::move(records), opts);
        table.records.insert(table.records.end(), records.begin(), records.end());
    }
    return table;
}

namespace {

std::string kinds_to_string(const std::set<CrisisKind>& kinds) {
    std::string out;
    for (CrisisKind k : kinds) {
        if (!out.empty()) out += '|';
        out += to_string(k);
    }
    return out;
}

}  // namespace

void write_loss_table(const LossTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "country,onset_year,kinds,twin,measure,duration,recovered,loss_fraction,loss_usd\n";
    out.precision(17);
    for (const auto& r : table.records) {
        out << r.country_id << ',' << r.onset_year << ',' << kinds_to_string(r.kinds) << ','
            << (r.twin ? 1 : 0) << ',' << to_string(r.measure) << ',' << r.duration_years << ','
            << (r.recovered ? 1 : 0) << ',' << r.loss_fraction << ',' << r.loss_usd << '\n';
    }
}

LossTable read_loss_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::string line;
    std::getline(in, line);  // header
    LossTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw ValidationError("malformed losses file: " + path);
        LossRecord r;
        r.country_id = fields[0];
        r.onset_year = std::stoi(fields[1]);
        std::stringstream ks(fields[2]);
        std::string kind;
        while (std::getline(ks, kind, '|')) {
            if (auto k = parse_crisis_kind(kind)) r.kinds.insert(*k);
        }
        r.twin = fields[3] == "1";
        auto m = parse_measure(fields[4]);
        if (!m) throw ValidationError("unknown measure in losses file: " + fields[4]);
        r.measure = *m;
        r.duration_years = std::stoi(fields[5]);
        r.recovered = fields[6] == "1";
        r.loss_fraction = std::stod(fields[7]);
        r.loss_usd = std::stod(fields[8]);
        table.records.push_back(std::move(r));
    }
    return table;
}

}  // namespace crisislda
