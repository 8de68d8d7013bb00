#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ahdyn/errors.hpp"
#include "ahdyn/noise.hpp"
#include "ahdyn/spectral.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ahdyn;

namespace {

constexpr double kD = 3.96e-5;

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double lag1 = 0.0;
};

Moments moments(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    Moments m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        c0 += (v[i] - m.mean) * (v[i] - m.mean);
        if (i + 1 < v.size()) c1 += (v[i] - m.mean) * (v[i + 1] - m.mean);
    }
    m.var = c0 / (n - 1.0);
    m.lag1 = c1 / c0;
    return m;
}

std::vector<double> ou_trace(double d_m, double rate, double dt, std::size_t n, std::uint64_t seed) {
    auto rng = RandomStream::for_trajectory(seed, 0);
    auto s = ou_stationary_sample(d_m, rate, dt, rng);
    std::vector<double> out(n);
    for (auto& v : out) {
        s = ou_step(s, sample_white(d_m, dt, rng), rate, dt);
        v = s.xi_n;
    }
    return out;
}

}  // namespace

TEST_CASE("white noise with zero amplitude is exactly zero") {
    auto rng = RandomStream::for_trajectory(3, 0);
    for (int i = 0; i < 100; ++i) CHECK(sample_white(0.0, 1.0, rng) == 0.0);
    CHECK_THROWS_AS(sample_white(kD, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_white(kD, -1.0, rng), std::invalid_argument);
}

TEST_CASE("white noise moments over 1e6 draws") {
    auto rng = RandomStream::for_trajectory(11, 0);
    const std::size_t n = 1000000;
    std::vector<double> v(n);
    for (auto& x : v) x = sample_white(kD, 1.0, rng);
    const auto m = moments(v);
    CHECK(m.var == near(2.0 * kD, 0.01));
    CHECK(std::abs(m.mean) < 4.0 * std::sqrt(2.0 * kD) / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(m.lag1) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("colored noise update") {
    CHECK(ou_step(ColoredNoiseState{0.3}, 0.3, 0.01, 1.0).xi_n == 0.3);
    CHECK(ou_step(ColoredNoiseState{1.0}, 0.0, 0.25, 1.0).xi_n == near(0.75));
    CHECK_THROWS_AS(ou_step(ColoredNoiseState{}, 0.0, 1.0, 1.0), StabilityError);
    CHECK_THROWS_AS(ou_step(ColoredNoiseState{}, 0.0, 0.5, 3.0), StabilityError);
    CHECK(ou_stationary_variance(kD, 0.01, 1.0) == near(oracle::discrete_ou_variance(kD, 0.01, 1.0)));
}

TEST_CASE("colored noise tracks the white input when the rate approaches 1/dt") {
    const auto v = ou_trace(kD, 0.999, 1.0, 200000, 5);
    const auto m = moments(v);
    CHECK(std::abs(m.lag1) < 0.01);
}

TEST_CASE("stationary variance over 1e7 steps matches the discrete recursion") {
    const auto v = ou_trace(kD, 0.01, 1.0, 10000000, 7);
    const double expect = oracle::discrete_ou_variance(kD, 0.01, 1.0);
    CHECK(expect == near(kD * 0.01, 0.01));
    CHECK(moments(v).var == near(expect, 0.02));
}

TEST_CASE("stationary initial draw has the stationary variance") {
    auto rng = RandomStream::for_trajectory(13, 0);
    std::vector<double> v(400000);
    for (auto& x : v) x = ou_stationary_sample(kD, 0.01, 1.0, rng).xi_n;
    CHECK(moments(v).var == near(oracle::discrete_ou_variance(kD, 0.01, 1.0), 0.01));
}

TEST_CASE("autocorrelation check recovers the decay rate") {
    const auto v = ou_trace(kD, 0.01, 1.0, 2000000, 17);
    const auto fit = ou_autocorrelation_check(v, 0.01, kD, 1.0);
    CHECK_FALSE(fit.skipped);
    CHECK(fit.stationary);
    CHECK_FALSE(fit.near_stability_boundary);
    CHECK(fit.fitted_rate >= 0.009);
    CHECK(fit.fitted_rate <= 0.011);
    CHECK(fit.fitted_zero_lag == near(fit.expected_zero_lag, 0.1));
}

TEST_CASE("property: total noise power equals 2 D_M") {
    const auto v = ou_trace(kD, 0.01, 1.0, 4000000, 19);
    const auto fit = ou_autocorrelation_check(v, 0.01, kD, 1.0);
    CHECK(fit.integrated_power_fit == near(2.0 * kD, 0.05));
    CHECK(fit.integrated_power_sum == near(2.0 * kD, 0.05));
}

TEST_CASE("property: empirical spectrum of the colored noise is Lorentzian at the configured rate") {
    const double rate = 0.01;
    const auto v = ou_trace(kD, rate, 1.0, 4000000, 23);
    const auto acf = autocovariance(v, 800);
    CorrelationTrace tr;
    for (std::size_t k = 0; k < acf.size(); ++k) {
        tr.tau.push_back(static_cast<double>(k));
        tr.values.push_back(acf[k]);
    }
    const auto fit = fit_lorentzian(power_spectrum(tr));
    CHECK(fit.gamma == near(rate, 0.1));
}

TEST_CASE("autocorrelation check guards") {
    std::vector<double> zeros(100000, 0.0);
    CHECK(ou_autocorrelation_check(zeros, 0.01, 0.0, 1.0).skipped);
    CHECK_THROWS_AS(ou_autocorrelation_check(std::vector<double>(500, 1.0), 0.01, kD, 1.0),
                    std::invalid_argument);

    const auto v = ou_trace(kD, 0.9, 1.0, 200000, 29);
    CHECK(ou_autocorrelation_check(v, 0.9, kD, 1.0).near_stability_boundary);

    // A trace that jumps halfway through is not stationary.
    auto drift = ou_trace(kD, 0.01, 1.0, 200000, 31);
    for (std::size_t i = drift.size() / 2; i < drift.size(); ++i) drift[i] += 0.01;
    CHECK_FALSE(ou_autocorrelation_check(drift, 0.01, kD, 1.0).stationary);
}

TEST_CASE("force fluctuations") {
    ModelParams p;
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    const double s = level_slope(p);

    // h(x) = mu gives f = 1/2.
    const double x_half = -p.e_d / s;
    const auto [a, b] = force_fluctuations(p, bath, x_half);
    CHECK(a == near(0.5 * s, 1e-12));
    CHECK(b == near(-0.5 * s, 1e-12));

    const auto [e0, e1] = force_fluctuations(p, bath, 1e5);
    CHECK(e0 == 0.0);
    CHECK(e1 == near(-s));

    for (int i = -200; i <= 200; i += 7) {
        const double x = 2.0 * i;
        for (const auto& bb : {bath, BathSpec::symmetric_junction(0.01, 0.2, 0.05)}) {
            const double f = fermi_effective(bb, level(p, x));
            const auto [d0, d1] = force_fluctuations(p, bb, x);
            CHECK(std::abs((1.0 - f) * d0 + f * d1) <= 1e-15 * s);
        }
    }
}
