#include <algorithm>
#include <cmath>
#include <string>

#include "ahdyn/config.hpp"
#include "ahdyn/errors.hpp"

namespace ahdyn {

namespace {

// Desk-scale run lengths reach the kinetic-energy plateau of every method
// that has one (several relaxation times at Gamma = 0.001 and 0.01).
constexpr double kEquilibrationTime = 40000.0;
constexpr double kWeakCouplingTime = 100000.0;
constexpr double kStrideStudyTime = 20000.0;

double ed_half(const ModelParams& p) { return p.g * p.g / (2.0 * p.hbar * p.omega); }
double ed_full(const ModelParams& p) { return p.g * p.g / (p.hbar * p.omega); }

ExperimentPreset equilibrium(std::string name, std::string description, Observable obs) {
    ExperimentPreset e = default_preset();
    e.name = std::move(name);
    e.description = std::move(description);
    e.observables = {obs};
    e.sweep.e_d = {ed_full(e.model), ed_half(e.model)};
    e.sweep.gamma = {0.001, 0.01};
    return e;
}

ExperimentPreset junction(std::string name, std::string description, Observable obs) {
    ExperimentPreset e = default_preset();
    e.name = std::move(name);
    e.description = std::move(description);
    e.bath = BathSpec::symmetric_junction(0.01, 0.05, e.bath.kT);
    e.observables = {obs};
    e.sweep.mu_left = {0.05, 0.2};
    e.sweep.gamma = {0.001, 0.01};
    return e;
}

ExperimentPreset spectral(std::string name, std::string description, ExperimentKind kind) {
    ExperimentPreset e = default_preset();
    e.name = std::move(name);
    e.description = std::move(description);
    e.kind = kind;
    e.methods = {Method::nmed};
    e.dynamics.amplitude_source = AmplitudeSource::fitted;
    e.sweep.gamma = {0.001, 0.01};
    return e;
}

}  // namespace

ExperimentPreset default_preset() {
    ExperimentPreset e;
    e.name = "default";
    e.description = "Kinetic energy and population, all methods, Gamma = 0.01, E_d = g^2/(2 hbar omega)";
    e.model = ModelParams{};
    e.model.e_d = ed_half(e.model);
    e.bath = BathSpec::single(0.01, 0.0, 0.05);
    e.ensemble.t_final = kEquilibrationTime;
    e.probe_x = -std::sqrt(2.0) * e.model.g / (e.model.hbar * e.model.omega);
    return e;
}

std::vector<std::string> preset_names() {
    return {"eq_ke", "eq_pop", "small_gamma", "neq_ke", "neq_pop", "current", "spectrum", "dm_compare", "stride_study"};
}

ExperimentPreset preset(std::string_view name) {
    if (name == "default") return default_preset();
    if (name == "eq_ke")
        return equilibrium("eq_ke", "Kinetic-energy relaxation, one bath, two E_d panels", Observable::ke);
    if (name == "eq_pop")
        return equilibrium("eq_pop", "Impurity population, one bath, two E_d panels", Observable::pop);
    if (name == "small_gamma") {
        ExperimentPreset e = default_preset();
        e.name = "small_gamma";
        e.description = "Kinetic energy and population at Gamma = 0.0001";
        e.bath = BathSpec::single(0.0001, 0.0, e.bath.kT);
        e.ensemble.t_final = kWeakCouplingTime;
        return e;
    }
    if (name == "neq_ke")
        return junction("neq_ke", "Kinetic-energy relaxation, biased two-lead junction", Observable::ke);
    if (name == "neq_pop")
        return junction("neq_pop", "Impurity population, biased two-lead junction", Observable::pop);
    if (name == "current")
        return junction("current", "Left-lead current, biased two-lead junction", Observable::current);
    if (name == "spectrum")
        return spectral("spectrum", "Force correlation trace and power spectrum at the probe position",
                        ExperimentKind::spectrum);
    if (name == "dm_compare")
        return spectral("dm_compare", "Analytic versus spectrally fitted D_M on an x grid",
                        ExperimentKind::dm_compare);
    if (name == "stride_study") {
        ExperimentPreset e = default_preset();
        e.name = "stride_study";
        e.description = "NM-ED with fitted D_M refreshed every 1, 10 and 50 steps";
        e.methods = {Method::nmed};
        e.dynamics.amplitude_source = AmplitudeSource::fitted;
        e.observables = {Observable::ke};
        e.sweep.update_stride = {1, 10, 50};
        e.ensemble.t_final = kStrideStudyTime;
        return e;
    }

    auto names = preset_names();
    std::string best = names.front();
    for (const auto& n : names)
        if (edit_distance(name, n) < edit_distance(name, best)) best = n;
    throw ConfigError({"unknown preset '" + std::string(name) + "' (did you mean '" + best + "'?)"});
}

}  // namespace ahdyn
