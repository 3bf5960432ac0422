#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crisislda/distfit.hpp"
#include "crisislda/lda.hpp"
#include "crisislda/measures.hpp"
#include "crisislda/report.hpp"
#include "crisislda/trend.hpp"

namespace py = pybind11;
using namespace crisislda;

PYBIND11_MODULE(_crisislda, m) {
    m.doc() = "Aggregate GDP-loss distributions for financial crises";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<NumericalError>(m, "NumericalError");

    m.def("hp_filter", &hp_filter, py::arg("series"), py::arg("smoothing") = 100.0,
          "Exact HP trend of an annual series");

    m.def(
        "precrisis_growth",
        [](const std::vector<double>& values, int first_year, int onset_year, int window,
           const std::string& method, double smoothing) {
            GdpSeries s{"_", first_year, values};
            TrendSpec spec;
            spec.method = method == "hp" ? TrendMethod::HpFiltered : TrendMethod::AverageGrowth;
            spec.window_years = window;
            spec.smoothing = smoothing;
            return precrisis_growth(s, onset_year, spec);
        },
        py::arg("values"), py::arg("first_year"), py::arg("onset_year"), py::arg("window") = 10,
        py::arg("method") = "hp", py::arg("smoothing") = 100.0,
        "Gross pre-crisis growth factor for one country series");

    m.def(
        "compute_loss",
        [](const std::vector<double>& values, int first_year, int onset_year,
           const std::string& measure) {
            GdpSeries s{"_", first_year, values};
            auto id = parse_measure(measure);
            if (!id) throw ValidationError("unknown measure: " + measure);
            CrisisEpisode ep{"_", onset_year, {CrisisKind::Banking}};
            const MeasureSpec spec = measure_spec(*id);
            if (!is_contractionary(ep, s, spec)) return py::object(py::none());
            LossRecord r = compute_loss(ep, s, spec);
            py::dict d;
            d["measure"] = to_string(r.measure);
            d["duration_years"] = r.duration_years;
            d["recovered"] = r.recovered;
            d["loss_fraction"] = r.loss_fraction;
            d["loss_usd"] = r.loss_usd;
            return py::object(d);
        },
        py::arg("values"), py::arg("first_year"), py::arg("onset_year"), py::arg("measure"),
        "Loss record for one episode, or None when not contractionary");

    m.def(
        "fit_poisson",
        [](const std::vector<int>& counts) {
            FrequencySample s{5, 0, counts};
            auto fit = fit_poisson(s);
            return py::make_tuple(fit.dist.lambda, fit.log_likelihood);
        },
        py::arg("counts"), "(lambda, log_likelihood) for 5-year event counts");

    m.def(
        "fit_negbin",
        [](const std::vector<int>& counts) {
            FrequencySample s{5, 0, counts};
            auto fit = fit_negbin(s);
            py::dict d;
            d["r"] = fit.dist.r;
            d["p"] = fit.dist.p;
            d["log_likelihood"] = fit.log_likelihood;
            d["underdispersed_fallback"] = fit.underdispersed_fallback;
            return d;
        },
        py::arg("counts"));

    m.def(
        "fit_severity",
        [](const std::vector<double>& losses, const std::string& family) {
            auto fam = parse_severity_family(family);
            if (!fam) throw ValidationError("unknown severity family: " + family);
            auto fit = fit_severity(losses, *fam);
            py::dict d;
            d["family"] = to_string(fit.dist.family);
            d["params"] = fit.dist.params;
            d["log_likelihood"] = fit.log_likelihood;
            d["aic"] = fit.aic;
            d["ks"] = fit.ks_statistic;
            return d;
        },
        py::arg("losses"), py::arg("family"));

    m.def(
        "mean_excess",
        [](const std::vector<double>& losses, const std::vector<double>& thresholds) {
            auto curve = mean_excess(losses, thresholds);
            return py::make_tuple(curve.thresholds, curve.mean_excess, curve.exceedances);
        },
        py::arg("losses"), py::arg("thresholds"));

    m.def(
        "simulate_aggregate",
        [](const std::string& freq_family, const std::vector<double>& freq_params,
           const std::string& sev_family, const std::vector<double>& sev_params,
           std::size_t n_sims, std::uint64_t seed, int workers,
           const std::vector<double>& percentiles) {
            FittedFrequencyModel freq;
            if (freq_family == "poisson") {
                freq.dist = {FrequencyFamily::Poisson, freq_params.at(0), 0.0, 0.0};
            } else if (freq_family == "negbin") {
                freq.dist = {FrequencyFamily::NegativeBinomial, 0.0, freq_params.at(0),
                             freq_params.at(1)};
            } else {
                throw ValidationError("unknown frequency family: " + freq_family);
            }
            auto fam = parse_severity_family(sev_family);
            if (!fam) throw ValidationError("unknown severity family: " + sev_family);
            FittedSeverityModel sev;
            sev.dist = {*fam, sev_params};
            auto dist = simulate_aggregate(freq, sev, n_sims, seed, workers);
            auto summary = risk_summary(dist, percentiles);
            py::dict d;
            d["mean"] = summary.mean;
            d["stddev"] = summary.stddev;
            py::dict pct;
            for (const auto& [q, v] : summary.percentiles) pct[py::float_(q)] = v;
            d["percentiles"] = pct;
            d["seed"] = dist.seed;
            d["n_sims"] = dist.n_sims;
            return d;
        },
        py::arg("freq_family"), py::arg("freq_params"), py::arg("sev_family"),
        py::arg("sev_params"), py::arg("n_sims") = 500000, py::arg("seed") = 42,
        py::arg("workers") = 1,
        py::arg("percentiles") = std::vector<double>{0.5, 0.99, 0.999});

    m.def(
        "panjer_compound",
        [](const std::string& freq_family, const std::vector<double>& freq_params,
           const std::string& sev_family, const std::vector<double>& sev_params, double step) {
            FrequencyDist freq;
            if (freq_family == "poisson") {
                freq = {FrequencyFamily::Poisson, freq_params.at(0), 0.0, 0.0};
            } else {
                freq = {FrequencyFamily::NegativeBinomial, 0.0, freq_params.at(0),
                        freq_params.at(1)};
            }
            auto fam = parse_severity_family(sev_family);
            if (!fam) throw ValidationError("unknown severity family: " + sev_family);
            SeverityDist sev{*fam, sev_params};
            auto pc = panjer_compound(freq, sev, step);
            return py::make_tuple(pc.step, pc.pmf);
        },
        py::arg("freq_family"), py::arg("freq_params"), py::arg("sev_family"),
        py::arg("sev_params"), py::arg("step"));

    m.def(
        "run_pipeline",
        [](const std::string& workspace, const std::string& out_dir, std::uint64_t seed,
           std::size_t n_sims, const std::string& measure, int workers, double world_gdp) {
            PipelineConfig cfg;
            cfg.workspace = workspace;
            cfg.output_dir = out_dir;
            cfg.seed = seed;
            cfg.n_sims = n_sims;
            cfg.n_workers = workers;
            auto m_ = parse_measure(measure);
            if (!m_) throw ValidationError("unknown measure: " + measure);
            cfg.lda_measure = *m_;
            cfg.report.world_gdp_2005usd = world_gdp;
            run_pipeline(cfg);
        },
        py::arg("workspace"), py::arg("out_dir"), py::arg("seed") = 42,
        py::arg("n_sims") = 500000, py::arg("measure") = "HP10trend", py::arg("workers") = 1,
        py::arg("world_gdp") = 4.405e13);

    m.attr("generator_version") = kGeneratorVersion;
    m.attr("all_measures") = [] {
        std::vector<std::string> names;
        for (MeasureId id : kAllMeasures) names.push_back(to_string(id));
        return names;
    }();
}
