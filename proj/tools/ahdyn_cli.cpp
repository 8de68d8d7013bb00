// ahdyn: run Anderson-Holstein trajectory-ensemble experiments.
//
//   ahdyn list-presets
//   ahdyn validate <config.ini|manifest.json|preset>
//   ahdyn run <preset|config.ini|manifest.json> [--seed N] [--n-traj N] [--paper-scale]
//             [--method M]... [--update-stride N] [--out-dir DIR] [--workers N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-stability error, 1 other.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ahdyn/config.hpp"
#include "ahdyn/errors.hpp"
#include "ahdyn/runner.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStability = 3;
constexpr std::size_t kPaperScale = 50000;

ahdyn::ExperimentPreset resolve(const std::string& target) {
    if (std::filesystem::is_regular_file(target)) return ahdyn::load_config(target);
    return ahdyn::preset(target);
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_traj;
    bool paper_scale = false;
    std::vector<std::string> methods;
    std::optional<std::size_t> update_stride;
};

void apply(ahdyn::ExperimentPreset& e, const Overrides& o) {
    if (o.seed) e.ensemble.seed = *o.seed;
    if (o.paper_scale) e.ensemble.n_traj = kPaperScale;
    if (o.n_traj) e.ensemble.n_traj = *o.n_traj;
    if (!o.methods.empty()) {
        e.methods.clear();
        std::vector<std::string> issues;
        for (const auto& name : o.methods) {
            if (const auto m = ahdyn::parse_method(name)) e.methods.push_back(*m);
            else issues.push_back("--method: unknown method '" + name + "' (expected ED, EF-LD, M-ED, NM-ED or SH)");
        }
        if (!issues.empty()) throw ahdyn::ConfigError(std::move(issues));
    }
    if (o.update_stride) {
        e.dynamics.update_stride = *o.update_stride;
        e.sweep.update_stride.clear();
    }
    e.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory-ensemble simulator for the Anderson-Holstein model"};
    app.require_subcommand(1);

    app.add_subcommand("list-presets", "List the built-in experiment presets");

    auto* validate = app.add_subcommand("validate", "Check a config and print it with all defaults filled in");
    std::string validate_target;
    validate->add_option("config", validate_target, "INI config, run manifest or preset name")->required();

    auto* run = app.add_subcommand("run", "Run a preset, config file or manifest");
    std::string run_target;
    std::filesystem::path out_dir = "out";
    int workers = 0;
    Overrides over;
    run->add_option("target", run_target, "Preset name, INI config or manifest.json")->required();
    run->add_option("--seed", over.seed, "Master seed");
    run->add_option("--n-traj", over.n_traj, "Number of trajectories")->check(CLI::PositiveNumber);
    run->add_flag("--paper-scale", over.paper_scale, "Use 50000 trajectories");
    run->add_option("--method", over.methods, "Restrict to these methods (repeatable)");
    run->add_option("--update-stride", over.update_stride, "Refresh D_M every N steps")->check(CLI::PositiveNumber);
    run->add_option("--out-dir", out_dir, "Output root directory");
    run->add_option("--workers", workers, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (app.got_subcommand("list-presets")) {
            for (const auto& name : ahdyn::preset_names())
                std::cout << name << "\t" << ahdyn::preset(name).description << "\n";
            return 0;
        }
        if (app.got_subcommand("validate")) {
            const auto e = resolve(validate_target);
            std::cout << ahdyn::format_ini(ahdyn::to_table(e));
            return 0;
        }
        auto e = resolve(run_target);
        apply(e, over);
        ahdyn::RunOptions options;
        options.out_dir = out_dir;
        options.workers = workers;
        options.log = [](std::string_view msg) { std::cerr << msg << std::endl; };
        const auto report = ahdyn::run_experiment(e, options);
        for (const auto& f : report.files) std::cout << f.string() << "\n";
        std::cout << report.manifest.string() << "\n";
        return 0;
    } catch (const ahdyn::ConfigError& e) {
        std::cerr << "configuration error:\n";
        for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
        return kExitConfig;
    } catch (const ahdyn::StabilityError& e) {
        std::cerr << "stability error: " << e.what() << "\n";
        return kExitStability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
