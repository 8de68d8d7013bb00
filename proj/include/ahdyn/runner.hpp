#pragma once

// Runs an ExperimentPreset and writes its CSV files plus manifest.json into
// <out_dir>/<preset name>/.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ahdyn/config.hpp"
#include "ahdyn/ensemble.hpp"

namespace ahdyn {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    int workers = 0;                               // 0: OpenMP default
    std::function<void(std::string_view)> log;     // progress lines; may be empty
};

struct RunReport {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;  // CSVs, in write order
    std::filesystem::path manifest;
    double wall_seconds = 0.0;
};

RunReport run_experiment(const ExperimentPreset& e, const RunOptions& options);

/// Columns t,mean,sem for one observable.
void write_frames_csv(std::ostream& os, const std::vector<ObservableFrame>& frames, Observable o);

/// `git describe` of the source tree at build time.
std::string_view version_string() noexcept;

}  // namespace ahdyn
