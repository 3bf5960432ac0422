#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "crisislda/ingest.hpp"
#include "crisislda/report.hpp"

namespace fs = std::filesystem;
using namespace crisislda;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// --config file: one key=value per line, '#' comments
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            std::size_t i = 0;
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            return s.substr(i);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<MeasureId> parse_measures_arg(const std::string& arg) {
    if (arg == "all") return {kAllMeasures.begin(), kAllMeasures.end()};
    std::vector<MeasureId> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto m = parse_measure(tok);
        if (!m) throw ValidationError("unknown measure: " + tok);
        out.push_back(*m);
    }
    if (out.empty()) throw ValidationError("no measures given");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"crisis-lda: aggregate GDP-loss distributions from crisis catalogs"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 42;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--seed", seed, "simulation seed");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate inputs and build a workspace");
    std::string gdp_path, crises_path, meta_path, ws_out;
    ingest->add_option("--gdp", gdp_path, "GDP panel CSV (country,year,gdp_const2005usd)")
        ->required();
    ingest->add_option("--crises", crises_path, "crisis catalog CSV (country,start_year,kind)")
        ->required();
    ingest->add_option("--meta", meta_path, "country metadata CSV (country,region,income_group)");
    ingest->add_option("--out", ws_out, "workspace directory")->required();

    // losses
    auto* losses = app.add_subcommand("losses", "compute loss records for all measures");
    std::string ws_dir, measures_arg = "all", gaps_arg = "net", losses_out = "losses.csv";
    double hp_lambda = 100.0;
    std::string anchor_arg = "raw";
    losses->add_option("--workspace", ws_dir, "workspace directory from ingest")->required();
    losses->add_option("--measures", measures_arg, "all or comma-separated measure names");
    losses->add_option("--gaps", gaps_arg, "net | positive-only");
    losses->add_option("--hp-lambda", hp_lambda, "HP smoothing penalty (annual default 100)");
    losses->add_option("--anchor", anchor_arg, "raw | filtered counterfactual anchor");
    losses->add_option("--out", losses_out, "output losses CSV");

    // fit
    auto* fit = app.add_subcommand("fit", "fit frequency and severity distributions");
    std::string fit_losses, fit_measure_arg = "HP10trend", fit_unit = "usd",
                fit_out = "fits.json", select_arg = "weibull";
    int fit_start = 1970, fit_end = 2005;
    fit->add_option("--losses", fit_losses, "losses CSV")->required();
    fit->add_option("--measure", fit_measure_arg, "measure to fit");
    fit->add_option("--unit", fit_unit, "usd | fraction");
    fit->add_option("--start-year", fit_start, "first frequency period year");
    fit->add_option("--end-year", fit_end, "one past the last frequency period year");
    fit->add_option("--select", select_arg, "weibull | aic severity selection policy");
    fit->add_option("--out", fit_out, "output fits JSON");

    // lda
    auto* lda = app.add_subcommand("lda", "compound frequency and severity by Monte Carlo");
    std::string lda_fits, lda_out = "lda.json", oracle_arg;
    std::size_t n_sims = 500000;
    int workers = 1;
    bool sidecar = false;
    lda->add_option("--fits", lda_fits, "fits JSON")->required();
    lda->add_option("--sims", n_sims, "number of simulated 5-year periods");
    lda->add_option("--workers", workers, "worker threads");
    lda->add_option("--out", lda_out, "output JSON");
    lda->add_option("--oracle", oracle_arg, "panjer: also run the recursion cross-check");
    lda->add_flag("--samples", sidecar, "write the full sample as a binary sidecar");

    // report
    auto* report = app.add_subcommand("report", "grouped severity tables from a losses CSV");
    std::string rep_losses, rep_workspace, rep_axis = "all", rep_out = "severity_table.csv";
    report->add_option("--losses", rep_losses, "losses CSV")->required();
    report->add_option("--workspace", rep_workspace, "workspace (for metadata axes)");
    report->add_option("--axis", rep_axis,
                       "all | crisis_type | twin_type | region | income_group | period5y");
    report->add_option("--out", rep_out, "output CSV");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "full run: losses, fits, lda, reports");
    std::string pl_workspace, pl_out = "results";
    std::string pl_measure = "HP10trend";
    std::size_t pl_sims = 500000;
    int pl_workers = 1;
    double world_gdp = 4.405e13;
    pipeline->add_option("--workspace", pl_workspace, "workspace directory")->required();
    pipeline->add_option("--out", pl_out, "output directory");
    pipeline->add_option("--measure", pl_measure, "measure feeding the LDA");
    pipeline->add_option("--sims", pl_sims, "number of simulations");
    pipeline->add_option("--workers", pl_workers, "worker threads");
    pipeline->add_option("--world-gdp", world_gdp, "2005 world GDP in constant 2005 USD");

    // global options (--seed, --config) may appear after the subcommand name
    for (CLI::App* sub : {ingest, losses, fit, lda, report, pipeline}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    std::map<std::string, std::string> cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (cfg.count("seed")) seed = std::stoull(cfg["seed"]);
    if (cfg.count("world_gdp_2005usd")) world_gdp = std::stod(cfg["world_gdp_2005usd"]);

    if (ingest->parsed()) {
        GdpPanel panel = load_gdp_panel(gdp_path);
        if (!meta_path.empty()) load_country_meta(meta_path, panel);
        LoadReport rep;
        auto events = load_crisis_catalog(crises_path, &rep);
        auto episodes = merge_episodes(events);
        fs::create_directories(ws_out);
        write_gdp_panel(panel, (fs::path(ws_out) / "gdp.csv").string());
        write_crisis_events(events, (fs::path(ws_out) / "crises.csv").string());
        if (!panel.meta.empty()) {
            write_country_meta(panel, (fs::path(ws_out) / "meta.csv").string());
        }
        std::cout << "ingest: " << panel.series.size() << " GDP series, " << events.size()
                  << " events, " << episodes.size() << " episodes";
        if (rep.duplicates_dropped > 0) {
            std::cout << " (" << rep.duplicates_dropped << " duplicates dropped)";
        }
        std::cout << '\n';
        return kExitOk;
    }

    if (losses->parsed()) {
        GdpPanel panel = load_gdp_panel((fs::path(ws_dir) / "gdp.csv").string());
        const auto meta_file = fs::path(ws_dir) / "meta.csv";
        if (fs::exists(meta_file)) load_country_meta(meta_file.string(), panel);
        auto events = load_crisis_catalog((fs::path(ws_dir) / "crises.csv").string());
        auto episodes = merge_episodes(events);
        LossOptions opts;
        opts.gaps = gaps_arg == "positive-only" ? GapMode::PositiveOnly : GapMode::Net;
        opts.hp_smoothing = hp_lambda;
        opts.anchor = anchor_arg == "filtered" ? Anchor::Filtered : Anchor::Raw;
        LossTable table = run_all_measures(panel, episodes, parse_measures_arg(measures_arg), opts);
        write_loss_table(table, losses_out);
        std::cout << "losses: " << table.records.size() << " records ("
                  << table.diagnostics.episodes_excluded_insufficient_history
                  << " excluded for insufficient history)\n";
        return kExitOk;
    }

    if (fit->parsed()) {
        LossTable table = read_loss_table(fit_losses);
        auto m = parse_measure(fit_measure_arg);
        if (!m) throw ValidationError("unknown measure: " + fit_measure_arg);
        const SelectionPolicy policy =
            select_arg == "aic" ? SelectionPolicy::MinAic : SelectionPolicy::WeibullBenchmark;
        FitResults fits = fit_measure(table, *m, fit_unit, fit_start, fit_end, policy);
        write_fits_json(fits, fit_out);
        std::cout << "fit: " << to_string(*m) << " selected " << to_string(fits.selected)
                  << " (variance/mean " << fits.freq_variance / fits.freq_mean << ")\n";
        return kExitOk;
    }

    if (lda->parsed()) {
        FitResults fits = read_fits_json(lda_fits);
        const FittedSeverityModel* sev = nullptr;
        for (const auto& f : fits.severity_fits) {
            if (f.dist.family == fits.selected) sev = &f;
        }
        if (!sev) throw ValidationError("fits.json: selected family has no fit entry");
        AggregateLossDistribution dist =
            simulate_aggregate(fits.negbin, *sev, n_sims, seed, workers);
        RiskSummary summary = risk_summary(dist);
        write_lda_json(summary, dist, lda_out, sidecar);
        std::cout << "lda: mean " << summary.mean << " p99 " << summary.percentiles.at(0.99)
                  << " p99.9 " << summary.percentiles.at(0.999) << '\n';
        if (oracle_arg == "panjer") {
            const double step = summary.percentiles.at(0.999) / 4096.0;
            DiscretizedCompound pc = panjer_compound(fits.negbin.dist, sev->dist, step);
            // Kolmogorov distance between recursion and simulation
            std::vector<double> sorted = dist.samples;
            std::sort(sorted.begin(), sorted.end());
            double ks = 0.0, cum = 0.0;
            std::size_t idx = 0;
            for (std::size_t j = 0; j < pc.pmf.size(); ++j) {
                cum += pc.pmf[j];
                const double x = (static_cast<double>(j) + 0.5) * pc.step;
                while (idx < sorted.size() && sorted[idx] <= x) ++idx;
                ks = std::max(ks,
                              std::fabs(cum - static_cast<double>(idx) / sorted.size()));
            }
            std::cout << "panjer oracle: Kolmogorov distance " << ks << '\n';
        }
        return kExitOk;
    }

    if (report->parsed()) {
        LossTable table = read_loss_table(rep_losses);
        GdpPanel panel;
        if (!rep_workspace.empty()) {
            const auto meta_file = fs::path(rep_workspace) / "meta.csv";
            if (fs::exists(meta_file)) load_country_meta(meta_file.string(), panel);
        }
        auto axis = parse_group_axis(rep_axis);
        if (!axis) throw ValidationError("unknown grouping axis: " + rep_axis);
        std::vector<MeasureId> all(kAllMeasures.begin(), kAllMeasures.end());
        SeverityTable t = severity_table(table, panel, all, *axis);
        write_severity_table_csv(t, rep_out);
        std::cout << render_severity_table(t);
        return kExitOk;
    }

    // pipeline
    PipelineConfig pc;
    pc.workspace = pl_workspace;
    pc.output_dir = pl_out;
    pc.seed = seed;
    pc.n_sims = pl_sims;
    pc.n_workers = pl_workers;
    auto m = parse_measure(pl_measure);
    if (!m) throw ValidationError("unknown measure: " + pl_measure);
    pc.lda_measure = *m;
    pc.report.world_gdp_2005usd = world_gdp;
    run_pipeline(pc);
    std::cout << "pipeline: artifacts written to " << pl_out << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
