#include "ahdyn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ahdyn/errors.hpp"
#include "fft.hpp"

namespace ahdyn {

double sample_white(double d_m, double dt, RandomStream& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_white: dt must be > 0");
    const double z = rng.gaussian();
    return std::sqrt(2.0 * d_m / dt) * z;
}

ColoredNoiseState ou_step(ColoredNoiseState state, double xi_m, double decay_rate, double dt) {
    const double a = decay_rate * dt;
    if (!(a < 1.0))
        throw StabilityError("colored-noise update unstable: decay_rate*dt = " + std::to_string(a) +
                             " >= 1");
    state.xi_n -= a * (state.xi_n - xi_m);
    return state;
}

double ou_stationary_variance(double d_m, double decay_rate, double dt) {
    const double a = decay_rate * dt;
    return a * a * (2.0 * d_m / dt) / (2.0 * a - a * a);
}

ColoredNoiseState ou_stationary_sample(double d_m, double decay_rate, double dt, RandomStream& rng) {
    return ColoredNoiseState{std::sqrt(ou_stationary_variance(d_m, decay_rate, dt)) * rng.gaussian()};
}

std::vector<double> autocovariance(std::span<const double> trace, std::size_t max_lag) {
    if (trace.empty()) return {};
    const double mean =
        std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(trace.size());
    std::vector<double> centered(trace.size());
    std::transform(trace.begin(), trace.end(), centered.begin(), [mean](double v) { return v - mean; });
    auto acf = detail::autocorrelation_sums(centered, max_lag);
    for (auto& v : acf) v /= static_cast<double>(trace.size());
    return acf;
}

AutocorrelationFit ou_autocorrelation_check(std::span<const double> trace, double decay_rate,
                                            double d_m, double dt) {
    AutocorrelationFit out;
    const double a = decay_rate * dt;
    out.near_stability_boundary = a >= 0.5;
    out.expected_zero_lag = d_m > 0.0 ? ou_stationary_variance(d_m, decay_rate, dt) : 0.0;

    if (std::all_of(trace.begin(), trace.end(), [](double v) { return v == 0.0; })) {
        out.skipped = true;
        return out;
    }
    if (trace.size() < 100000)
        throw std::invalid_argument("ou_autocorrelation_check: need at least 1e5 samples");

    // Correlation length of the recursion in steps; fit the first ~2 e-folds.
    const double corr_steps = a > 0.0 ? 1.0 / a : 1.0;
    const auto fit_lags = static_cast<std::size_t>(
        std::clamp(2.0 * corr_steps, 2.0, static_cast<double>(trace.size() / 20)));
    const auto sum_lags = static_cast<std::size_t>(
        std::clamp(12.0 * corr_steps, 4.0, static_cast<double>(trace.size() / 10)));

    const auto acf = autocovariance(trace, std::max(fit_lags, sum_lags));

    // Least squares of log C(k) = log C0 + k s over lags with positive C.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k <= fit_lags && k < acf.size(); ++k) {
        if (!(acf[k] > 0.0)) break;
        const double y = std::log(acf[k]);
        const double xk = static_cast<double>(k);
        sx += xk;
        sy += y;
        sxx += xk * xk;
        sxy += xk * y;
        ++n;
    }
    if (n < 2) throw FitError("ou_autocorrelation_check: autocorrelation not positive at short lags");
    const double nd = static_cast<double>(n);
    const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nd;
    const double r = std::exp(slope);

    out.fitted_rate = (1.0 - r) / dt;
    out.fitted_zero_lag = std::exp(intercept);
    out.integrated_power_fit = dt * out.fitted_zero_lag * (1.0 + r) / (1.0 - r);

    double acc = acf[0];
    for (std::size_t k = 1; k <= sum_lags && k < acf.size(); ++k) acc += 2.0 * acf[k];
    out.integrated_power_sum = dt * acc;

    // Stationarity: each of 10 block means must lie within 5 standard errors of
    // the overall mean. The error uses the expected zero-frequency power 2 D_M,
    // since a level shift would inflate the fitted one and mask itself.
    const std::size_t blocks = 10;
    const std::size_t len = trace.size() / blocks;
    const double overall =
        std::accumulate(trace.begin(), trace.begin() + static_cast<long>(blocks * len), 0.0) /
        static_cast<double>(blocks * len);
    const double block_se =
        std::sqrt(2.0 * d_m / dt / static_cast<double>(len));
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto first = trace.begin() + static_cast<long>(b * len);
        const double m = std::accumulate(first, first + static_cast<long>(len), 0.0) /
                         static_cast<double>(len);
        if (std::abs(m - overall) > 5.0 * block_se) out.stationary = false;
    }
    return out;
}

std::pair<double, double> force_fluctuations(const ModelParams& p, const BathSpec& bath, double x) {
    const double slope = level_slope(p);
    const double f = fermi_effective(bath, level(p, x));
    // dF_zeta = -dH_zeta/dx + <dH/dx>_ss with <dH/dx>_ss = dU_0/dx + f dh/dx.
    return {slope * f, -slope * (1.0 - f)};
}

}  // namespace ahdyn
