#include "crisislda/types.hpp"

#include <algorithm>
#include <cctype>

namespace crisislda {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::Africa: return "Africa";
        case Region::Europe: return "Europe";
        case Region::LatinAmerica: return "LatinAmerica";
        case Region::Asia: return "Asia";
        case Region::NorthAmerica: return "NorthAmerica";
        case Region::Oceania: return "Oceania";
    }
    return "?";
}

std::string to_string(IncomeGroup g) {
    switch (g) {
        case IncomeGroup::Low: return "Low";
        case IncomeGroup::Middle: return "Middle";
        case IncomeGroup::High: return "High";
    }
    return "?";
}

std::string to_string(CrisisKind k) {
    switch (k) {
        case CrisisKind::Banking: return "Banking";
        case CrisisKind::Currency: return "Currency";
        case CrisisKind::Debt: return "Debt";
    }
    return "?";
}

std::optional<Region> parse_region(const std::string& s) {
    const std::string v = lower(s);
    if (v == "africa") return Region::Africa;
    if (v == "europe") return Region::Europe;
    if (v == "latinamerica" || v == "latin_america" || v == "latin america")
        return Region::LatinAmerica;
    if (v == "asia") return Region::Asia;
    if (v == "northamerica" || v == "north_america" || v == "north america")
        return Region::NorthAmerica;
    if (v == "oceania") return Region::Oceania;
    return std::nullopt;
}

std::optional<IncomeGroup> parse_income_group(const std::string& s) {
    const std::string v = lower(s);
    if (v == "low") return IncomeGroup::Low;
    if (v == "middle") return IncomeGroup::Middle;
    if (v == "high") return IncomeGroup::High;
    return std::nullopt;
}

std::optional<CrisisKind> parse_crisis_kind(const std::string& s) {
    const std::string v = lower(s);
    if (v == "banking") return CrisisKind::Banking;
    if (v == "currency") return CrisisKind::Currency;
    if (v == "debt") return CrisisKind::Debt;
    return std::nullopt;
}

double GdpSeries::at(int year) const {
    if (!covers(year)) {
        throw ValidationError("GdpSeries " + country_id + " does not cover year " +
                              std::to_string(year));
    }
    return values[static_cast<std::size_t>(year - first_year)];
}

const GdpSeries* GdpPanel::find(const std::string& country) const {
    auto it = series.find(country);
    return it == series.end() ? nullptr : &it->second;
}

const CountryMeta* GdpPanel::find_meta(const std::string& country) const {
    auto it = meta.find(country);
    return it == meta.end() ? nullptr : &it->second;
}

}  // namespace crisislda
