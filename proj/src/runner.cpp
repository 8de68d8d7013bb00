#include "ahdyn/runner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "ahdyn/csv.hpp"
#include "ahdyn/errors.hpp"
#include "ahdyn/spectral.hpp"

#ifndef AHDYN_VERSION
#define AHDYN_VERSION "unknown"
#endif

namespace ahdyn {

std::string_view version_string() noexcept { return AHDYN_VERSION; }

void write_frames_csv(std::ostream& os, const std::vector<ObservableFrame>& frames, Observable o) {
    std::vector<double> t, mean, sem;
    t.reserve(frames.size());
    mean.reserve(frames.size());
    sem.reserve(frames.size());
    for (const auto& f : frames) {
        t.push_back(f.t);
        switch (o) {
            case Observable::ke:
                mean.push_back(f.mean_ke);
                sem.push_back(f.sem_ke);
                break;
            case Observable::pop:
                mean.push_back(f.mean_pop);
                sem.push_back(f.sem_pop);
                break;
            case Observable::current:
                if (!f.mean_current) throw std::invalid_argument("write_frames_csv: frames carry no current");
                mean.push_back(*f.mean_current);
                sem.push_back(*f.sem_current);
                break;
        }
    }
    csv::write_columns(os, {"t", "mean", "sem"}, {t, mean, sem});
}

namespace {

std::string stem(const Panel& panel, std::string_view suffix) {
    return panel.label.empty() ? std::string(suffix) : panel.label + "_" + std::string(suffix);
}

class Writer {
public:
    explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

    template <class Fn>
    void write(const std::string& name, Fn&& fn) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        fn(out);
        out.close();
        if (!out) throw std::runtime_error("write failed for " + path.string());
        files.push_back(path);
    }

    std::vector<std::filesystem::path> files;

private:
    std::filesystem::path dir_;
};

void log(const RunOptions& o, const std::string& msg) {
    if (o.log) o.log(msg);
}

void run_dynamics(const ExperimentPreset& e, const RunOptions& options, Writer& w) {
    for (const auto& panel : e.panels()) {
        for (const auto m : e.methods) {
            MethodConfig mc = panel.dynamics;
            mc.method = m;
            log(options, "running " + std::string(method_name(m)) +
                             (panel.label.empty() ? "" : " [" + panel.label + "]"));
            const auto frames = run_ensemble(panel.model, panel.bath, mc, e.ensemble, options.workers);
            for (const auto o : e.observables) {
                const auto name = stem(panel, std::string(method_token(m)) + "_" +
                                                  std::string(observable_name(o)) + ".csv");
                w.write(name, [&](std::ostream& os) { write_frames_csv(os, frames, o); });
            }
        }
    }
}

void run_spectrum(const ExperimentPreset& e, Writer& w, nlohmann::json& results) {
    for (const auto& panel : e.panels()) {
        const auto trace = correlation_trace(panel.model, panel.bath, e.probe_x, panel.dynamics.dt);
        const auto spectrum = power_spectrum(trace);
        w.write(stem(panel, "trace.csv"), [&](std::ostream& os) { write_csv(os, trace); });
        w.write(stem(panel, "spectrum.csv"), [&](std::ostream& os) { write_csv(os, spectrum); });
        const auto fit = fit_lorentzian(spectrum, panel.model.hbar);
        results.push_back({{"panel", panel.label},
                           {"x", e.probe_x},
                           {"d_m_analytic", noise_amplitude_analytic(panel.model, panel.bath, e.probe_x)},
                           {"d_m_fitted", fit.d_m},
                           {"gamma", panel.bath.total_gamma()},
                           {"gamma_fitted", fit.gamma},
                           {"residual", fit.residual}});
    }
}

void run_dm_compare(const ExperimentPreset& e, Writer& w) {
    for (const auto& panel : e.panels()) {
        std::vector<double> xs, analytic, fitted;
        for (std::size_t i = 0; i < e.x_points; ++i) {
            const double x = e.x_min + (e.x_max - e.x_min) * static_cast<double>(i) /
                                           static_cast<double>(e.x_points - 1);
            xs.push_back(x);
            analytic.push_back(noise_amplitude_analytic(panel.model, panel.bath, x));
            fitted.push_back(fitted_amplitude(panel.model, panel.bath, x, panel.dynamics.dt).d_m);
        }
        w.write(stem(panel, "dm.csv"), [&](std::ostream& os) {
            csv::write_columns(os, {"x", "analytic", "fitted"}, {xs, analytic, fitted});
        });
    }
}

}  // namespace

RunReport run_experiment(const ExperimentPreset& e, const RunOptions& options) {
    e.validate();
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.directory = options.out_dir / e.name;
    std::filesystem::create_directories(report.directory);

    Writer w(report.directory);
    nlohmann::json results = nlohmann::json::array();
    switch (e.kind) {
        case ExperimentKind::dynamics: run_dynamics(e, options, w); break;
        case ExperimentKind::spectrum: run_spectrum(e, w, results); break;
        case ExperimentKind::dm_compare: run_dm_compare(e, w); break;
    }
    report.files = w.files;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json config = nlohmann::json::object();
    for (const auto& [section, entries] : to_table(e)) {
        auto& node = config[section.empty() ? "_" : section];
        for (const auto& [k, v] : entries) node[k] = v;
    }
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : report.files) files.push_back(f.filename().string());
    nlohmann::json manifest{{"name", e.name},
                            {"kind", kind_name(e.kind)},
                            {"version", version_string()},
                            {"seed", e.ensemble.seed},
                            {"wall_time_s", report.wall_seconds},
                            {"files", files},
                            {"config", config}};
    if (!results.empty()) manifest["results"] = results;

    report.manifest = report.directory / "manifest.json";
    std::ofstream out(report.manifest, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + report.manifest.string());
    out << manifest.dump(2) << '\n';
    return report;
}

}  // namespace ahdyn
