#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "crisislda/ingest.hpp"
#include "crisislda/report.hpp"
#include "fixtures.hpp"

using namespace crisislda;

namespace {

// Synthetic panel: `n_countries` series from 1960, 3% trend growth, each with
// one multi-year slump of country-specific depth so losses vary.
void write_workspace(const std::filesystem::path& dir, int n_countries = 14) {
    std::ofstream gdp(dir / "gdp.csv");
    std::ofstream crises(dir / "crises.csv");
    std::ofstream meta(dir / "meta.csv");
    gdp << "country,year,gdp_const2005usd\n";
    crises << "country,start_year,kind\n";
    meta << "country,region,income_group\n";
    for (int c = 0; c < n_countries; ++c) {
        const std::string id = "C" + std::to_string(10 + c);
        const int onset = 1975 + 2 * c;  // spread over 1975..2001
        const double depth = 0.70 + 0.015 * c;
        double v = 1e10 * (1.0 + 0.3 * c);
        gdp.precision(15);
        for (int year = 1960; year <= 2010; ++year) {
            double level = v;
            if (year >= onset && year < onset + 4) level *= depth;
            gdp << id << ',' << year << ',' << level << '\n';
            v *= 1.03;
        }
        crises << id << ',' << onset << ',' << (c % 3 == 0 ? "Banking" : "Currency") << '\n';
        if (c % 4 == 0) crises << id << ',' << onset << ",Debt\n";
        meta << id << ',' << (c % 2 == 0 ? "LatinAmerica" : "Asia") << ','
             << (c % 3 == 0 ? "High" : "Middle") << '\n';
    }
}

LossTable pipeline_loss_table(const std::filesystem::path& dir, GdpPanel* panel_out = nullptr) {
    GdpPanel panel = load_gdp_panel((dir / "gdp.csv").string());
    load_country_meta((dir / "meta.csv").string(), panel);
    auto episodes = merge_episodes(load_crisis_catalog((dir / "crises.csv").string()));
    std::vector<MeasureId> measures(kAllMeasures.begin(), kAllMeasures.end());
    LossTable table = run_all_measures(panel, episodes, measures);
    if (panel_out) *panel_out = panel;
    return table;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("single-record cell reports its own value everywhere") {
    LossTable table;
    LossRecord r;
    r.country_id = "X";
    r.onset_year = 1984;
    r.measure = MeasureId::HP10trend;
    r.kinds = {CrisisKind::Banking};
    r.loss_fraction = 0.37;
    table.records.push_back(r);
    GdpPanel panel;
    auto t = severity_table(table, panel, {MeasureId::HP10trend}, GroupAxis::All);
    REQUIRE(t.cells.size() == 1);
    CHECK(t.cells[0].n == 1);
    CHECK(t.cells[0].mean == 0.37);
    CHECK(t.cells[0].median == 0.37);
    CHECK(t.cells[0].stddev == 0.0);
    CHECK(t.cells[0].min == 0.37);
    CHECK(t.cells[0].max == 0.37);
}

TEST_CASE("world GDP share matches the benchmark ratios") {
    ReportConfig cfg;
    CHECK(to_world_gdp_share(3.0e12, cfg) == doctest::Approx(0.0681).epsilon(0.002));
    CHECK(to_world_gdp_share(1.7e12, cfg) == doctest::Approx(0.0386).epsilon(0.002));
    cfg.world_gdp_2005usd = 0.0;
    CHECK_THROWS_AS(to_world_gdp_share(1.0, cfg), ValidationError);
}

TEST_CASE("insurance coverage is the percentile minus the median") {
    RiskSummary s;
    s.percentiles = {{0.5, 1.9e11}, {0.99, 1.7e12}};
    CHECK(insurance_coverage(s, 0.99) == doctest::Approx(1.51e12));
    CHECK_THROWS_WITH_AS(insurance_coverage(s, 0.999), doctest::Contains("QuantileMissing"),
                         ValidationError);
}

TEST_CASE("partition axes conserve the record count, multi-label axes can exceed it") {
    testutil::TempDir dir("report_axes");
    write_workspace(dir.path);
    GdpPanel panel;
    LossTable table = pipeline_loss_table(dir.path, &panel);
    std::size_t n_measure = 0;
    for (const auto& r : table.records) {
        if (r.measure == MeasureId::HP10trend) ++n_measure;
    }
    REQUIRE(n_measure >= 10);

    // period and region partition the records: cell sizes sum to the total
    for (GroupAxis axis : {GroupAxis::Period5y, GroupAxis::Region, GroupAxis::All}) {
        auto t = severity_table(table, panel, {MeasureId::HP10trend}, axis);
        std::size_t sum = 0;
        for (const auto& c : t.cells) sum += static_cast<std::size_t>(c.n);
        CHECK(sum == n_measure);
    }
    // crisis-type cells can count a twin record once per kind
    auto by_type = severity_table(table, panel, {MeasureId::HP10trend}, GroupAxis::CrisisType);
    std::size_t sum = 0;
    for (const auto& c : by_type.cells) sum += static_cast<std::size_t>(c.n);
    CHECK(sum >= n_measure);
}

TEST_CASE("fit results round-trip through JSON") {
    testutil::TempDir dir("report_fits");
    write_workspace(dir.path);
    LossTable table = pipeline_loss_table(dir.path);
    FitResults fits = fit_measure(table, MeasureId::HP10trend, "fraction", 1970, 2005);
    testutil::TempFile f("fits_rt.json", "");
    write_fits_json(fits, f.path.string());
    FitResults rt = read_fits_json(f.path.string());
    CHECK(rt.measure == fits.measure);
    CHECK(rt.poisson.dist.lambda == fits.poisson.dist.lambda);
    CHECK(rt.negbin.dist.r == fits.negbin.dist.r);
    CHECK(rt.selected == fits.selected);
    REQUIRE(rt.severity_fits.size() == fits.severity_fits.size());
    for (std::size_t i = 0; i < rt.severity_fits.size(); ++i) {
        CHECK(rt.severity_fits[i].converged == fits.severity_fits[i].converged);
        if (fits.severity_fits[i].converged) {
            CHECK(rt.severity_fits[i].dist.params == fits.severity_fits[i].dist.params);
        }
    }
}

TEST_CASE("lda json sidecar stores samples as little-endian float64") {
    AggregateLossDistribution dist;
    dist.samples = {1.5, -2.25, 1e12};
    dist.seed = 9;
    dist.n_sims = 3;
    RiskSummary s = risk_summary(dist, {0.5});
    testutil::TempDir dir("report_lda");
    const std::string path = (dir.path / "lda.json").string();
    write_lda_json(s, dist, path, true);
    std::ifstream bin(path + ".samples.f64le", std::ios::binary);
    REQUIRE(bin.good());
    double back[3];
    bin.read(reinterpret_cast<char*>(back), sizeof(back));
    CHECK(back[0] == 1.5);
    CHECK(back[1] == -2.25);
    CHECK(back[2] == 1e12);
}

TEST_CASE("pipeline produces the full artifact set and reruns byte-identically") {
    testutil::TempDir ws("pipe_ws");
    testutil::TempDir out1("pipe_out1");
    testutil::TempDir out2("pipe_out2");
    write_workspace(ws.path);

    PipelineConfig cfg;
    cfg.workspace = ws.path.string();
    cfg.n_sims = 20000;
    cfg.seed = 77;
    cfg.n_workers = 2;
    cfg.output_dir = out1.path.string();
    run_pipeline(cfg);

    for (const char* name :
         {"losses.csv", "fits.json", "fits_fraction.json", "lda.json", "risk_report.json",
          "severity_all.csv", "severity_crisis_type.csv", "severity_region.csv",
          "severity_income_group.csv", "severity_period5y.csv", "fig_frequency_pmf.csv",
          "fig_severity_density.csv", "fig_aggregate_hist.csv", "fig_aggregate_hist.svg",
          "manifest.json"}) {
        CHECK_MESSAGE(std::filesystem::exists(out1.path / name), name);
    }

    cfg.output_dir = out2.path.string();
    cfg.n_workers = 1;  // worker count must not affect any output byte
    run_pipeline(cfg);
    for (const char* name : {"losses.csv", "fits.json", "lda.json", "manifest.json"}) {
        CHECK_MESSAGE(slurp(out1.path / name) == slurp(out2.path / name), name);
    }
}

TEST_CASE("pipeline surfaces a missing catalog with the offending path") {
    testutil::TempDir ws("pipe_missing");
    testutil::TempDir out("pipe_missing_out");
    write_workspace(ws.path);
    std::filesystem::remove(ws.path / "crises.csv");
    PipelineConfig cfg;
    cfg.workspace = ws.path.string();
    cfg.output_dir = out.path.string();
    cfg.n_sims = 1000;
    CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("crises.csv"), ValidationError);
}
