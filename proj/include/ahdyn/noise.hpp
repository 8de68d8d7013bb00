#pragma once

// Random forces for the Ehrenfest corrections: Markovian white noise and the
// colored (Ornstein-Uhlenbeck-type) force obtained by relaxing toward it.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ahdyn/model.hpp"
#include "ahdyn/random.hpp"

namespace ahdyn {

enum class AmplitudeSource { analytic, fitted };

/// Markovian noise strength plus the decay rate of the memory kernel, cached
/// per trajectory and refreshed every `update_stride` steps.
struct NoiseAmplitude {
    double d_m = 0.0;
    double decay_rate = 1.0;
    AmplitudeSource source = AmplitudeSource::analytic;
    double evaluated_at_x = 0.0;
    std::size_t age_steps = 0;
    bool valid = false;

    bool stale(std::size_t update_stride) const noexcept {
        return !valid || age_steps >= update_stride;
    }
};

struct ColoredNoiseState {
    double xi_n = 0.0;
};

/// Markovian force sample with variance 2 D_M / dt. Always consumes exactly
/// one Gaussian draw so streams stay aligned when D_M is zero.
double sample_white(double d_m, double dt, RandomStream& rng);

/// Explicit update xi_N <- xi_N - rate dt (xi_N - xi_M). Throws StabilityError
/// when rate * dt >= 1.
ColoredNoiseState ou_step(ColoredNoiseState state, double xi_m, double decay_rate, double dt);

/// Stationary variance of the discrete OU recursion driven by white noise of
/// strength D_M: (a^2 2D_M/dt) / (2a - a^2) with a = rate * dt.
double ou_stationary_variance(double d_m, double decay_rate, double dt);

/// Draw xi_N from the stationary distribution of the discrete recursion.
ColoredNoiseState ou_stationary_sample(double d_m, double decay_rate, double dt, RandomStream& rng);

struct AutocorrelationFit {
    bool skipped = false;                  // all-zero trace, nothing to fit
    bool stationary = true;                // false: block means drift past 5 sigma
    bool near_stability_boundary = false;  // rate * dt >= 0.5
    double fitted_rate = 0.0;              // inverted from the discrete lag-1 decay
    double fitted_zero_lag = 0.0;
    double expected_zero_lag = 0.0;
    double integrated_power_fit = 0.0;  // full-axis integral of the fitted kernel
    double integrated_power_sum = 0.0;  // full-axis sum of the empirical autocorrelation
};

/// Fit an exponential to the empirical autocorrelation of a sampled xi_N trace
/// (at least 1e5 samples; an all-zero trace is skipped).
AutocorrelationFit ou_autocorrelation_check(std::span<const double> trace, double decay_rate,
                                            double d_m, double dt);

/// Empirical autocovariance at lags 0..max_lag (mean removed, biased normalization).
std::vector<double> autocovariance(std::span<const double> trace, std::size_t max_lag);

/// Surface-resolved force fluctuations (dF_0, dF_1) about the steady-state mean force.
std::pair<double, double> force_fluctuations(const ModelParams& p, const BathSpec& bath, double x);

}  // namespace ahdyn
