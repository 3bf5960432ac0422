#include "crisislda/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace crisislda {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    return s.substr(i);
}

int parse_int(const std::string& s, const std::string& context, int line_no) {
    int v = 0;
    const std::string t = strip(s);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ValidationError("MalformedRow at line " + std::to_string(line_no) + " (" + context +
                              "): bad integer '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, const std::string& context, int line_no) {
    const std::string t = strip(s);
    try {
        std::size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("MalformedRow at line " + std::to_string(line_no) + " (" + context +
                              "): bad number '" + s + "'");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return in;
}

}  // namespace

GdpPanel load_gdp_panel(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty GDP file: " + path);

    // country -> year -> gdp; missing cells (empty gdp field) recorded as NaN
    std::map<std::string, std::map<int, double>> raw;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 3) {
            throw ValidationError("MalformedRow at line " + std::to_string(line_no) +
                                  ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        const std::string country = strip(fields[0]);
        const int year = parse_int(fields[1], "year", line_no);
        if (strip(fields[2]).empty()) continue;  // missing observation
        const double gdp = parse_double(fields[2], "gdp", line_no);
        if (gdp <= 0.0) {
            throw ValidationError("NonPositiveGdp: " + country + " " + std::to_string(year) +
                                  " (line " + std::to_string(line_no) + ")");
        }
        raw[country][year] = gdp;
    }

    GdpPanel panel;
    for (auto& [country, by_year] : raw) {
        if (by_year.size() < 2) continue;  // spec requires length >= 2
        GdpSeries s;
        s.country_id = country;
        s.first_year = by_year.begin()->first;
        int expected = s.first_year;
        for (auto& [year, gdp] : by_year) {
            if (year != expected) {
                throw ValidationError("InteriorGap: " + country + " missing year " +
                                      std::to_string(expected));
            }
            s.values.push_back(gdp);
            ++expected;
        }
        panel.series.emplace(country, std::move(s));
    }
    return panel;
}

void load_country_meta(const std::string& path, GdpPanel& panel) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    std::getline(in, line);  // header
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 3) {
            throw ValidationError("MalformedRow at line " + std::to_string(line_no) +
                                  " in meta file");
        }
        CountryMeta m;
        m.country_id = strip(fields[0]);
        auto region = parse_region(strip(fields[1]));
        auto income = parse_income_group(strip(fields[2]));
        if (!region || !income) {
            throw ValidationError("MalformedRow at line " + std::to_string(line_no) +
                                  ": unknown region or income group");
        }
        m.region = *region;
        m.income_group = *income;
        panel.meta[m.country_id] = m;
    }
}

std::vector<CrisisEvent> load_crisis_catalog(const std::string& path, LoadReport* report) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<CrisisEvent> events;
    int line_no = 1;
    LoadReport local;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 3) {
            throw ValidationError("MalformedRow at line " + std::to_string(line_no) +
                                  " in crisis catalog");
        }
        ++local.rows_read;
        CrisisEvent e;
        e.country_id = strip(fields[0]);
        e.start_year = parse_int(fields[1], "start_year", line_no);
        auto kind = parse_crisis_kind(strip(fields[2]));
        if (!kind) {
            throw ValidationError("UnknownKind '" + strip(fields[2]) + "' at line " +
                                  std::to_string(line_no));
        }
        e.kind = *kind;
        events.push_back(e);
    }
    std::sort(events.begin(), events.end());
    auto last = std::unique(events.begin(), events.end());
    local.duplicates_dropped = static_cast<int>(events.end() - last);
    if (local.duplicates_dropped > 0) {
        local.warnings.push_back("DuplicateEvent: dropped " +
                                 std::to_string(local.duplicates_dropped) + " duplicate rows");
    }
    events.erase(last, events.end());
    if (report) *report = local;
    return events;
}

std::vector<CrisisEpisode> merge_episodes(std::vector<CrisisEvent> events,
                                          int twin_window_years) {
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    std::vector<CrisisEpisode> episodes;
    for (const auto& e : events) {
        CrisisEpisode* target = nullptr;
        if (!episodes.empty()) {
            auto& back = episodes.back();
            if (back.country_id == e.country_id &&
                e.start_year - back.start_year <= twin_window_years) {
                target = &back;
            }
        }
        if (!target) {
            episodes.push_back(CrisisEpisode{e.country_id, e.start_year, {}});
            target = &episodes.back();
        }
        target->kinds.insert(e.kind);
    }
    return episodes;
}

void write_gdp_panel(const GdpPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "country,year,gdp_const2005usd\n";
    out.precision(17);
    for (const auto& [country, s] : panel.series) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << country << ',' << (s.first_year + static_cast<int>(i)) << ',' << s.values[i]
                << '\n';
        }
    }
}

void write_country_meta(const GdpPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "country,region,income_group\n";
    for (const auto& [country, m] : panel.meta) {
        out << country << ',' << to_string(m.region) << ',' << to_string(m.income_group) << '\n';
    }
}

void write_crisis_events(const std::vector<CrisisEvent>& events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "country,start_year,kind\n";
    for (const auto& e : events) {
        out << e.country_id << ',' << e.start_year << ',' << to_string(e.kind) << '\n';
    }
}

}  // namespace crisislda
