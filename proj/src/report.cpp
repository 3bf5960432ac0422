#include "crisislda/report.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crisislda/ingest.hpp"

namespace crisislda {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(GroupAxis a) {
    switch (a) {
        case GroupAxis::CrisisType: return "crisis_type";
        case GroupAxis::TwinType: return "twin_type";
        case GroupAxis::Region: return "region";
        case GroupAxis::IncomeGroup: return "income_group";
        case GroupAxis::Period5y: return "period5y";
        case GroupAxis::All: return "all";
    }
    return "?";
}

std::optional<GroupAxis> parse_group_axis(const std::string& s) {
    if (s == "crisis_type" || s == "type") return GroupAxis::CrisisType;
    if (s == "twin_type" || s == "twin") return GroupAxis::TwinType;
    if (s == "region") return GroupAxis::Region;
    if (s == "income_group" || s == "income") return GroupAxis::IncomeGroup;
    if (s == "period5y" || s == "period") return GroupAxis::Period5y;
    if (s == "all") return GroupAxis::All;
    return std::nullopt;
}

namespace {

// Group labels for one record under an axis; a record can land in several
// cells (each crisis type it contains, each matching twin pair).
std::vector<std::string> group_labels(const LossRecord& r, const GdpPanel& panel, GroupAxis axis,
                                      int period_start, int period_length) {
    switch (axis) {
        case GroupAxis::All:
            return {"All"};
        case GroupAxis::CrisisType: {
            std::vector<std::string> out;
            for (CrisisKind k : r.kinds) out.push_back(to_string(k));
            return out;
        }
        case GroupAxis::TwinType: {
            if (!r.twin) return {};
            std::vector<std::string> out;
            auto has = [&](CrisisKind k) { return r.kinds.count(k) > 0; };
            if (has(CrisisKind::Currency) && has(CrisisKind::Debt)) out.push_back("Currency+Debt");
            if (has(CrisisKind::Currency) && has(CrisisKind::Banking))
                out.push_back("Currency+Banking");
            if (has(CrisisKind::Debt) && has(CrisisKind::Banking)) out.push_back("Debt+Banking");
            out.push_back("AllTwin");
            return out;
        }
        case GroupAxis::Region: {
            const CountryMeta* m = panel.find_meta(r.country_id);
            if (!m) return {};
            return {to_string(m->region)};
        }
        case GroupAxis::IncomeGroup: {
            const CountryMeta* m = panel.find_meta(r.country_id);
            if (!m) return {};
            return {to_string(m->income_group)};
        }
        case GroupAxis::Period5y: {
            if (r.onset_year < period_start) return {};
            const int idx = (r.onset_year - period_start) / period_length;
            const int lo = period_start + idx * period_length;
            return {std::to_string(lo) + "-" + std::to_string(lo + period_length)};
        }
    }
    return {};
}

GroupCell cell_stats(const std::string& group, MeasureId measure, std::vector<double> v) {
    GroupCell c;
    c.group = group;
    c.measure = measure;
    c.n = static_cast<int>(v.size());
    if (v.empty()) return c;
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    c.mean = sum / c.n;
    c.median = c.n % 2 == 1 ? v[c.n / 2] : 0.5 * (v[c.n / 2 - 1] + v[c.n / 2]);
    c.min = v.front();
    c.max = v.back();
    double ss = 0.0;
    for (double x : v) ss += (x - c.mean) * (x - c.mean);
    c.stddev = c.n > 1 ? std::sqrt(ss / (c.n - 1)) : 0.0;
    return c;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

SeverityTable severity_table(const LossTable& table, const GdpPanel& panel,
                             const std::vector<MeasureId>& measures, GroupAxis axis,
                             int period_start_year, int period_length) {
    if (table.records.empty()) throw ValidationError("severity_table: empty loss table");
    SeverityTable out;
    out.axis = axis;
    std::map<std::pair<std::string, MeasureId>, std::vector<double>> buckets;
    for (const auto& r : table.records) {
        if (std::find(measures.begin(), measures.end(), r.measure) == measures.end()) continue;
        for (const auto& g : group_labels(r, panel, axis, period_start_year, period_length)) {
            buckets[{g, r.measure}].push_back(r.loss_fraction);
        }
    }
    for (auto& [key, values] : buckets) {
        out.cells.push_back(cell_stats(key.first, key.second, std::move(values)));
    }
    return out;
}

std::string render_severity_table(const SeverityTable& table) {
    std::ostringstream os;
    os << std::left << std::setw(18) << "group" << std::setw(14) << "measure" << std::right
       << std::setw(6) << "n" << std::setw(10) << "mean" << std::setw(10) << "median"
       << std::setw(10) << "std" << std::setw(10) << "min" << std::setw(10) << "max" << '\n';
    os << std::string(88, '-') << '\n';
    os << std::fixed << std::setprecision(4);
    for (const auto& c : table.cells) {
        os << std::left << std::setw(18) << c.group << std::setw(14) << to_string(c.measure)
           << std::right << std::setw(6) << c.n;
        if (c.n == 0) {
            os << std::setw(10) << "-" << std::setw(10) << "-" << std::setw(10) << "-"
               << std::setw(10) << "-" << std::setw(10) << "-";
        } else {
            os << std::setw(10) << c.mean << std::setw(10) << c.median << std::setw(10) << c.stddev
               << std::setw(10) << c.min << std::setw(10) << c.max;
        }
        os << '\n';
    }
    return os.str();
}

void write_severity_table_csv(const SeverityTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "group,measure,n,mean,median,std,min,max\n";
    out.precision(12);
    for (const auto& c : table.cells) {
        out << c.group << ',' << to_string(c.measure) << ',' << c.n << ',' << c.mean << ','
            << c.median << ',' << c.stddev << ',' << c.min << ',' << c.max << '\n';
    }
}

double to_world_gdp_share(double usd, const ReportConfig& config) {
    if (!(config.world_gdp_2005usd > 0.0)) {
        throw ValidationError("to_world_gdp_share: world GDP constant must be positive");
    }
    return usd / config.world_gdp_2005usd;
}

double insurance_coverage(const RiskSummary& summary, double q) {
    auto it = summary.percentiles.find(q);
    auto med = summary.percentiles.find(0.5);
    if (it == summary.percentiles.end() || med == summary.percentiles.end()) {
        throw ValidationError("QuantileMissing: percentile " + std::to_string(q) +
                              " or the median was not computed");
    }
    return it->second - med->second;
}

void emit_mean_excess_csv(const MeanExcessCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "threshold,mean_excess,exceedances\n";
    out.precision(12);
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << curve.thresholds[i] << ',' << curve.mean_excess[i] << ',' << curve.exceedances[i]
            << '\n';
    }
}

void emit_frequency_pmf_csv(const FittedFrequencyModel& poisson,
                            const FittedFrequencyModel& negbin, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "count,poisson_pmf,negbin_pmf\n";
    out.precision(12);
    // span counts until both fitted models have covered 1 - 1e-6 of mass
    double mass_p = 0.0, mass_n = 0.0;
    for (unsigned n = 0; n < 100000; ++n) {
        const double pp = poisson.dist.pmf(n);
        const double pn = negbin.dist.pmf(n);
        out << n << ',' << pp << ',' << pn << '\n';
        mass_p += pp;
        mass_n += pn;
        if (mass_p > 1.0 - 1e-6 && mass_n > 1.0 - 1e-6) break;
    }
}

void emit_severity_density_csv(const std::vector<FittedSeverityModel>& fits, double x_max,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "x";
    for (const auto& f : fits) out << ',' << to_string(f.dist.family);
    out << '\n';
    out.precision(12);
    const int points = 300;
    for (int i = 1; i <= points; ++i) {
        const double x = x_max * i / points;
        out << x;
        for (const auto& f : fits) out << ',' << f.dist.pdf(x);
        out << '\n';
    }
}

void emit_aggregate_histogram_csv(const AggregateLossDistribution& dist, int bins,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    const auto [mn, mx] = std::minmax_element(dist.samples.begin(), dist.samples.end());
    const double lo = *mn, hi = *mx;
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : dist.samples) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= counts.size()) b = counts.size() - 1;
        ++counts[b];
    }
    out << "bin_lo,bin_hi,count,density\n";
    out.precision(12);
    for (std::size_t b = 0; b < counts.size(); ++b) {
        const double blo = lo + b * width;
        out << blo << ',' << blo + width << ',' << counts[b] << ','
            << static_cast<double>(counts[b]) / (dist.samples.size() * width) << '\n';
    }
}

namespace {

void write_svg(const std::string& path, const std::string& title,
               const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n"
        << "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n"
        << "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n"
        << body << "</svg>\n";
}

}  // namespace

void emit_histogram_svg(const std::vector<double>& values, int bins, const std::string& title,
                        const std::string& path) {
    if (values.empty()) throw ValidationError("emit_histogram_svg: empty input");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn, hi = *mx;
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= counts.size()) b = counts.size() - 1;
        ++counts[b];
    }
    const std::size_t peak = *std::max_element(counts.begin(), counts.end());
    std::ostringstream body;
    const double plot_w = 600.0, plot_h = 360.0;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        const double h = peak > 0 ? plot_h * counts[b] / peak : 0.0;
        body << "<rect x=\"" << 20.0 + plot_w * b / counts.size() << "\" y=\"" << 400.0 - h
             << "\" width=\"" << plot_w / counts.size() << "\" height=\"" << h
             << "\" fill=\"steelblue\" stroke=\"white\"/>\n";
    }
    write_svg(path, title, body.str());
}

void emit_curve_svg(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& title, const std::string& path) {
    if (x.size() != y.size() || x.empty()) {
        throw ValidationError("emit_curve_svg: mismatched or empty coordinates");
    }
    const auto [xmn, xmx] = std::minmax_element(x.begin(), x.end());
    const auto [ymn, ymx] = std::minmax_element(y.begin(), y.end());
    const double xr = *xmx > *xmn ? *xmx - *xmn : 1.0;
    const double yr = *ymx > *ymn ? *ymx - *ymn : 1.0;
    std::ostringstream body;
    body << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        body << 20.0 + 600.0 * (x[i] - *xmn) / xr << ',' << 400.0 - 360.0 * (y[i] - *ymn) / yr
             << ' ';
    }
    body << "\"/>\n";
    write_svg(path, title, body.str());
}

FitResults fit_measure(const LossTable& table, MeasureId measure, const std::string& unit,
                       int freq_start_year, int freq_end_year, SelectionPolicy policy) {
    FitResults out;
    out.measure = measure;
    out.unit = unit;

    const FrequencySample sample =
        build_frequency_sample(table, measure, freq_start_year, freq_end_year);
    out.freq_mean = sample.mean();
    out.freq_variance = sample.variance();
    out.poisson = fit_poisson(sample);
    out.negbin = fit_negbin(sample);

    std::vector<double> losses;
    for (const auto& r : table.records) {
        if (r.measure != measure) continue;
        losses.push_back(unit == "fraction" ? r.loss_fraction : r.loss_usd);
    }
    for (SeverityFamily fam :
         {SeverityFamily::Gamma, SeverityFamily::Exponential, SeverityFamily::GEV,
          SeverityFamily::GeneralizedPareto, SeverityFamily::LogNormal,
          SeverityFamily::Weibull}) {
        try {
            out.severity_fits.push_back(fit_severity(losses, fam));
        } catch (const Error& e) {
            FittedSeverityModel failed;
            failed.dist.family = fam;
            failed.converged = false;
            failed.note = e.what();
            out.severity_fits.push_back(std::move(failed));
        }
    }
    std::vector<FittedSeverityModel> ok;
    for (const auto& f : out.severity_fits) {
        if (f.converged) ok.push_back(f);
    }
    out.selected = select_severity_model(ok, policy).dist.family;
    return out;
}

namespace {

json severity_fit_to_json(const FittedSeverityModel& f) {
    return json{{"family", to_string(f.dist.family)}, {"params", f.dist.params},
                {"log_likelihood", f.log_likelihood},  {"aic", f.aic},
                {"ks", f.ks_statistic},                {"converged", f.converged},
                {"note", f.note}};
}

FittedSeverityModel severity_fit_from_json(const json& j) {
    FittedSeverityModel f;
    auto fam = parse_severity_family(j.at("family").get<std::string>());
    if (!fam) throw ValidationError("fits.json: unknown severity family");
    f.dist.family = *fam;
    f.dist.params = j.at("params").get<std::vector<double>>();
    f.log_likelihood = j.at("log_likelihood").get<double>();
    f.aic = j.at("aic").get<double>();
    f.ks_statistic = j.at("ks").get<double>();
    f.converged = j.at("converged").get<bool>();
    f.note = j.value("note", "");
    return f;
}

}  // namespace

void write_fits_json(const FitResults& fits, const std::string& path) {
    json j;
    j["measure"] = to_string(fits.measure);
    j["unit"] = fits.unit;
    j["frequency"] = {
        {"sample_mean", fits.freq_mean},
        {"sample_variance", fits.freq_variance},
        {"variance_to_mean",
         fits.freq_mean > 0.0 ? fits.freq_variance / fits.freq_mean : 0.0},
        {"poisson",
         {{"lambda", fits.poisson.dist.lambda}, {"log_likelihood", fits.poisson.log_likelihood}}},
        {"negbin",
         {{"r", fits.negbin.dist.r},
          {"p", fits.negbin.dist.p},
          {"log_likelihood", fits.negbin.log_likelihood},
          {"underdispersed_fallback", fits.negbin.underdispersed_fallback}}},
    };
    j["severity"] = json::array();
    for (const auto& f : fits.severity_fits) j["severity"].push_back(severity_fit_to_json(f));
    j["selected_family"] = to_string(fits.selected);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

FitResults read_fits_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    json j;
    in >> j;
    FitResults fits;
    auto m = parse_measure(j.at("measure").get<std::string>());
    if (!m) throw ValidationError("fits.json: unknown measure");
    fits.measure = *m;
    fits.unit = j.at("unit").get<std::string>();
    const auto& freq = j.at("frequency");
    fits.freq_mean = freq.at("sample_mean").get<double>();
    fits.freq_variance = freq.at("sample_variance").get<double>();
    fits.poisson.dist = {FrequencyFamily::Poisson, freq.at("poisson").at("lambda").get<double>(),
                         0.0, 0.0};
    fits.poisson.log_likelihood = freq.at("poisson").at("log_likelihood").get<double>();
    fits.negbin.dist = {FrequencyFamily::NegativeBinomial, 0.0,
                        freq.at("negbin").at("r").get<double>(),
                        freq.at("negbin").at("p").get<double>()};
    fits.negbin.log_likelihood = freq.at("negbin").at("log_likelihood").get<double>();
    fits.negbin.underdispersed_fallback =
        freq.at("negbin").value("underdispersed_fallback", false);
    for (const auto& f : j.at("severity")) {
        fits.severity_fits.push_back(severity_fit_from_json(f));
    }
    auto sel = parse_severity_family(j.at("selected_family").get<std::string>());
    if (!sel) throw ValidationError("fits.json: unknown selected family");
    fits.selected = *sel;
    return fits;
}

void write_lda_json(const RiskSummary& summary, const AggregateLossDistribution& dist,
                    const std::string& path, bool with_sample_sidecar) {
    json j;
    j["generator_version"] = kGeneratorVersion;
    j["seed"] = dist.seed;
    j["n_sims"] = dist.n_sims;
    j["mean"] = summary.mean;
    j["stddev"] = summary.stddev;
    json pct = json::object();
    for (const auto& [q, v] : summary.percentiles) {
        std::ostringstream key;
        key << q;
        pct[key.str()] = v;
    }
    j["percentiles"] = pct;
    if (with_sample_sidecar) {
        const std::string sidecar = path + ".samples.f64le";
        std::ofstream bin(sidecar, std::ios::binary);
        if (!bin) throw ValidationError("cannot write file: " + sidecar);
        static_assert(std::endian::native == std::endian::little,
                      "sample sidecar assumes a little-endian host");
        bin.write(reinterpret_cast<const char*>(dist.samples.data()),
                  static_cast<std::streamsize>(dist.samples.size() * sizeof(double)));
        j["samples_file"] = fs::path(sidecar).filename().string();
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

void run_pipeline(const PipelineConfig& config) {
    fs::create_directories(config.output_dir);
    const fs::path ws(config.workspace);
    const fs::path out(config.output_dir);

    // ingest
    GdpPanel panel = load_gdp_panel((ws / "gdp.csv").string());
    const bool has_meta = fs::exists(ws / "meta.csv");
    if (has_meta) load_country_meta((ws / "meta.csv").string(), panel);
    auto events = load_crisis_catalog((ws / "crises.csv").string());
    auto episodes = merge_episodes(events);

    // losses
    std::vector<MeasureId> measures(kAllMeasures.begin(), kAllMeasures.end());
    LossTable table = run_all_measures(panel, episodes, measures, config.loss_options);
    write_loss_table(table, (out / "losses.csv").string());

    // fits (USD for the LDA, fraction for the percentage-loss reporting)
    FitResults fits_usd =
        fit_measure(table, config.lda_measure, "usd", config.freq_start_year, config.freq_end_year);
    write_fits_json(fits_usd, (out / "fits.json").string());
    FitResults fits_frac = fit_measure(table, config.lda_measure, "fraction",
                                       config.freq_start_year, config.freq_end_year);
    write_fits_json(fits_frac, (out / "fits_fraction.json").string());

    // lda
    const FittedSeverityModel* sev = nullptr;
    for (const auto& f : fits_usd.severity_fits) {
        if (f.dist.family == fits_usd.selected) sev = &f;
    }
    AggregateLossDistribution dist = simulate_aggregate(fits_usd.negbin, *sev, config.n_sims,
                                                        config.seed, config.n_workers);
    RiskSummary summary = risk_summary(dist, config.report.percentiles);
    write_lda_json(summary, dist, (out / "lda.json").string());

    // tables
    for (GroupAxis axis : {GroupAxis::All, GroupAxis::CrisisType, GroupAxis::TwinType,
                           GroupAxis::Region, GroupAxis::IncomeGroup, GroupAxis::Period5y}) {
        if ((axis == GroupAxis::Region || axis == GroupAxis::IncomeGroup) && !has_meta) continue;
        try {
            SeverityTable t =
                severity_table(table, panel, measures, axis, config.freq_start_year, 5);
            const std::string stem = "severity_" + to_string(axis);
            write_severity_table_csv(t, (out / (stem + ".csv")).string());
            std::ofstream txt(out / (stem + ".txt"));
            txt << render_severity_table(t);
        } catch (const ValidationError&) {
            // empty axis (e.g. no twin crises in a small fixture) is not fatal
        }
    }

    // risk report: world GDP shares and insurance coverage
    {
        json risk;
        risk["measure"] = to_string(config.lda_measure);
        risk["world_gdp_2005usd"] = config.report.world_gdp_2005usd;
        json rows = json::array();
        for (const auto& [q, v] : summary.percentiles) {
            rows.push_back({{"percentile", q},
                            {"loss_usd", v},
                            {"share_of_world_gdp", to_world_gdp_share(v, config.report)}});
        }
        rows.push_back({{"statistic", "mean"},
                        {"loss_usd", summary.mean},
                        {"share_of_world_gdp", to_world_gdp_share(summary.mean, config.report)}});
        risk["rows"] = rows;
        json coverage = json::array();
        for (double q : config.report.percentiles) {
            if (q <= 0.5) continue;
            const double cov = insurance_coverage(summary, q);
            coverage.push_back({{"percentile", q},
                                {"coverage_usd", cov},
                                {"coverage_share", to_world_gdp_share(cov, config.report)}});
        }
        risk["insurance_coverage"] = coverage;
        std::ofstream rf(out / "risk_report.json");
        rf << risk.dump(2) << '\n';
    }

    // plot data
    emit_frequency_pmf_csv(fits_usd.poisson, fits_usd.negbin,
                           (out / "fig_frequency_pmf.csv").string());
    {
        std::vector<double> frac_losses;
        for (const auto& r : table.records) {
            if (r.measure == config.lda_measure) frac_losses.push_back(r.loss_fraction);
        }
        std::sort(frac_losses.begin(), frac_losses.end());
        std::vector<double> thresholds;
        for (int d = 0; d <= 8; ++d) {
            thresholds.push_back(frac_losses[frac_losses.size() * d / 10]);
        }
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        try {
            MeanExcessCurve curve = mean_excess(frac_losses, thresholds);
            emit_mean_excess_csv(curve, (out / "fig_mean_excess.csv").string());
            emit_curve_svg(curve.thresholds, curve.mean_excess, "Mean excess over threshold",
                           (out / "fig_mean_excess.svg").string());
        } catch (const ValidationError&) {
        }
        std::vector<FittedSeverityModel> converged;
        for (const auto& f : fits_frac.severity_fits) {
            if (f.converged) converged.push_back(f);
        }
        emit_severity_density_csv(converged, 1.5, (out / "fig_severity_density.csv").string());
    }
    emit_aggregate_histogram_csv(dist, 100, (out / "fig_aggregate_hist.csv").string());
    emit_histogram_svg(dist.samples, 100, "Aggregate 5-year loss distribution",
                       (out / "fig_aggregate_hist.svg").string());

    // manifest
    {
        std::ostringstream cfg;
        cfg << config.workspace << '|' << config.seed << '|' << config.n_sims << '|'
            << to_string(config.lda_measure) << '|'
            << (config.loss_options.gaps == GapMode::Net ? "net" : "positive-only") << '|'
            << config.loss_options.hp_smoothing << '|' << config.freq_start_year << '|'
            << config.freq_end_year << '|' << config.report.world_gdp_2005usd;
        json manifest;
        manifest["generator_version"] = kGeneratorVersion;
        manifest["seed"] = config.seed;
        manifest["n_sims"] = config.n_sims;
        manifest["measure"] = to_string(config.lda_measure);
        manifest["config_hash"] = fnv1a(cfg.str());
        manifest["records"] = table.records.size();
        manifest["episodes"] = episodes.size();
        std::ofstream mf(out / "manifest.json");
        mf << manifest.dump(2) << '\n';
    }
}

}  // namespace crisislda
