#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahdyn {

/// An explicit update would be unstable or a rate-times-step bound is violated.
class StabilityError : public std::runtime_error {
public:
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}

    StabilityError(const std::string& what, std::size_t trajectory)
        : std::runtime_error(what + " (trajectory " + std::to_string(trajectory) + ")"),
          trajectory_(trajectory) {}

    std::optional<std::size_t> trajectory() const noexcept { return trajectory_; }

private:
    std::optional<std::size_t> trajectory_;
};

/// A least-squares fit failed or its data does not have the expected shape.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// One or more configuration values are invalid. Each issue names a field path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace ahdyn
