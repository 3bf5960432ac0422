#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace crisislda {

// Errors carry a stage label so the CLI can map them to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

enum class Region { Africa, Europe, LatinAmerica, Asia, NorthAmerica, Oceania };
enum class IncomeGroup { Low, Middle, High };
enum class CrisisKind { Banking, Currency, Debt };

std::string to_string(Region r);
std::string to_string(IncomeGroup g);
std::string to_string(CrisisKind k);
std::optional<Region> parse_region(const std::string& s);
std::optional<IncomeGroup> parse_income_group(const std::string& s);
std::optional<CrisisKind> parse_crisis_kind(const std::string& s);

struct CountryMeta {
    std::string country_id;  // ISO-3
    Region region;
    IncomeGroup income_group;
};

// Annual real GDP levels in constant 2005 USD, consecutive years, no gaps.
struct GdpSeries {
    std::string country_id;
    int first_year = 0;
    std::vector<double> values;

    int last_year() const { return first_year + static_cast<int>(values.size()) - 1; }
    bool covers(int year) const { return year >= first_year && year <= last_year(); }
    double at(int year) const;
};

struct GdpPanel {
    std::map<std::string, GdpSeries> series;
    std::map<std::string, CountryMeta> meta;

    const GdpSeries* find(const std::string& country) const;
    const CountryMeta* find_meta(const std::string& country) const;
};

struct CrisisEvent {
    std::string country_id;
    int start_year = 0;
    CrisisKind kind;

    friend bool operator<(const CrisisEvent& a, const CrisisEvent& b) {
        if (a.country_id != b.country_id) return a.country_id < b.country_id;
        if (a.start_year != b.start_year) return a.start_year < b.start_year;
        return a.kind < b.kind;
    }
    friend bool operator==(const CrisisEvent& a, const CrisisEvent& b) {
        return a.country_id == b.country_id && a.start_year == b.start_year && a.kind == b.kind;
    }
};

struct CrisisEpisode {
    std::string country_id;
    int start_year = 0;
    std::set<CrisisKind> kinds;

    bool twin() const { return kinds.size() >= 2; }
};

}  // namespace crisislda
