#pragma once

// Experiment descriptions. An ExperimentPreset names a model, a bath, the
// methods to run, ensemble settings and optional sweep axes; it is built from
// one of the named presets and then overridden by an INI-style config file
// (or by the config table recorded in a run manifest).

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ahdyn/dynamics.hpp"
#include "ahdyn/ensemble.hpp"
#include "ahdyn/model.hpp"

namespace ahdyn {

enum class ExperimentKind { dynamics, spectrum, dm_compare };
enum class Observable { ke, pop, current };

std::string_view kind_name(ExperimentKind k) noexcept;
std::string_view observable_name(Observable o) noexcept;

/// Each non-empty axis multiplies the number of panels.
struct Sweep {
    std::vector<double> e_d;
    std::vector<double> gamma;    // total hybridization; lead ratios are kept
    std::vector<double> mu_left;  // two leads only; mu_right = -mu_left
    std::vector<std::size_t> update_stride;
};

/// One fully specified parameter point of an experiment.
struct Panel {
    std::string label;  // "" when nothing is swept, else e.g. "ed0.1333_gamma0.001"
    ModelParams model;
    BathSpec bath;
    MethodConfig dynamics;  // method is filled in per run
};

struct ExperimentPreset {
    std::string name = "default";
    std::string description;
    ExperimentKind kind = ExperimentKind::dynamics;
    ModelParams model;
    BathSpec bath = BathSpec::single(0.01, 0.0, 0.05);
    std::vector<Method> methods{std::begin(all_methods), std::end(all_methods)};
    MethodConfig dynamics;
    EnsembleConfig ensemble;
    std::vector<Observable> observables{Observable::ke, Observable::pop};
    Sweep sweep;
    // spectrum and dm_compare
    double probe_x = 0.0;
    double x_min = -150.0;
    double x_max = 150.0;
    std::size_t x_points = 50;

    /// Throws ConfigError listing every invalid field, then StabilityError if
    /// any panel/method pair violates its (Gamma/hbar) dt bound.
    void validate() const;
    std::vector<Panel> panels() const;
};

/// section -> key -> value; top-level keys live in section "".
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

std::vector<std::string> preset_names();
/// Throws ConfigError (naming the nearest preset) for unknown names.
ExperimentPreset preset(std::string_view name);
/// Baseline parameters: one lead, Gamma = 0.01, E_d = g^2/(2 hbar omega), all methods.
ExperimentPreset default_preset();

/// Start from `preset` (or the default) and apply every other key. Unknown
/// keys are rejected with the nearest valid key. Validates the result.
ExperimentPreset from_table(const ConfigTable& table);
/// Full, explicit table for a preset; from_table(to_table(e)) reproduces e.
ConfigTable to_table(const ExperimentPreset& e);

ConfigTable parse_ini(std::string_view text);
std::string format_ini(const ConfigTable& table);

/// INI file, or a run manifest (".json") whose "config" member is replayed.
ExperimentPreset load_config(const std::filesystem::path& path);

/// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace ahdyn
