#pragma once

#include <cstdint>
#include <random>

namespace ahdyn {

/// Per-trajectory random stream. Owned by exactly one trajectory; never shared.
struct RandomStream {
    std::mt19937_64 engine;
    std::normal_distribution<double> normal{0.0, 1.0};
    std::uniform_real_distribution<double> uniform{0.0, 1.0};

    explicit RandomStream(std::uint64_t seed) : engine(seed) {}

    /// Stream for trajectory `index` of an ensemble with master seed `seed`.
    /// Depends only on the pair, so the result is independent of scheduling.
    static RandomStream for_trajectory(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
        RandomStream s(0);
        s.engine.seed(seq);
        return s;
    }

    double gaussian() { return normal(engine); }
    double unit() { return uniform(engine); }
};

}  // namespace ahdyn
