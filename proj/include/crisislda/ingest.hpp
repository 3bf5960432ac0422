#pragma once

#include <string>
#include <vector>

#include "crisislda/types.hpp"

namespace crisislda {

struct LoadReport {
    int rows_read = 0;
    int duplicates_dropped = 0;
    std::vector<std::string> warnings;
};

// gdp.csv: country,year,gdp_const2005usd (long format, one header row).
// Missing GDP cells at series edges are trimmed; interior gaps are rejected.
GdpPanel load_gdp_panel(const std::string& path);

// meta.csv: country,region,income_group. Missing metadata only excludes a
// country from grouped reports, never from fitting.
void load_country_meta(const std::string& path, GdpPanel& panel);

// crises.csv: country,start_year,kind. Duplicate rows are dropped with a
// warning counted in the report.
std::vector<CrisisEvent> load_crisis_catalog(const std::string& path, LoadReport* report = nullptr);

// Events sharing (country, start_year) within twin_window_years collapse into
// one episode with unioned kinds. Default window 0: same-year only.
std::vector<CrisisEpisode> merge_episodes(std::vector<CrisisEvent> events,
                                          int twin_window_years = 0);

void write_gdp_panel(const GdpPanel& panel, const std::string& path);
void write_country_meta(const GdpPanel& panel, const std::string& path);
void write_crisis_events(const std::vector<CrisisEvent>& events, const std::string& path);

}  // namespace crisislda
