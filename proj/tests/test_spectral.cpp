#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ahdyn/errors.hpp"
#include "ahdyn/spectral.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ahdyn;

namespace {

ModelParams params() { return ModelParams{}; }

// Probe position used for the spectra: x = -sqrt(2) g / (hbar omega).
double probe(const ModelParams& p) { return -std::sqrt(2.0) * p.g / (p.hbar * p.omega); }

Spectrum exact_lorentzian(double d_m, double rate, std::size_t n, double w_max) {
    Spectrum s;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = w_max * static_cast<double>(i) / static_cast<double>(n - 1);
        s.omega.push_back(w);
        s.k.push_back(oracle::lorentzian(w, d_m, rate));
    }
    return s;
}

}  // namespace

TEST_CASE("correlation trace decays as the discrete exponential") {
    const auto p = params();
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    const double dt = 0.5;
    const auto tr = correlation_trace(p, bath, probe(p), 800.0, dt);
    REQUIRE(tr.tau.size() == 1601);
    CHECK(tr.tau.front() == 0.0);
    CHECK(tr.tau.back() == near(800.0));

    const double f = fermi(level(p, probe(p)), 0.0, 0.05);
    const double c0 = f * (1.0 - f) * level_slope(p) * level_slope(p);
    CHECK(tr.values[0] == near(c0, 1e-12));

    const double r = oracle::rk4_decay_factor(0.01 * dt);
    for (std::size_t i = 0; i < tr.values.size(); i += 97)
        CHECK(tr.values[i] == near(c0 * std::pow(r, static_cast<double>(i)), 1e-10));

    // tau = hbar/Gamma sits at index 200.
    CHECK(tr.values[200] / tr.values[0] == near(std::exp(-1.0), 0.02));
    for (std::size_t i = 1; i < tr.values.size(); ++i) CHECK(tr.values[i] < tr.values[i - 1]);
}

TEST_CASE("correlation trace edge cases") {
    auto p = params();
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    CHECK_THROWS_AS(correlation_trace(p, bath, 0.0, 800.0, 10.5), std::invalid_argument);
    CHECK_NOTHROW(correlation_trace(p, bath, 0.0, 800.0, 10.0));

    const auto def = correlation_trace(p, bath, 0.0);
    CHECK(def.tau[1] == 1.0);
    CHECK(def.tau.back() == near(800.0));
    const auto weak = correlation_trace(p, BathSpec::single(0.001, 0.0, 0.05), 0.0);
    CHECK(weak.tau.back() == near(8000.0));
    const auto strong = correlation_trace(p, BathSpec::single(0.1, 0.0, 0.05), 0.0);
    CHECK(strong.tau[1] == near(0.2));

    p.g = 0.0;
    for (const double v : correlation_trace(p, bath, 5.0).values) CHECK(v == 0.0);
}

TEST_CASE("power spectrum equals the cosine transform of the even extension") {
    const auto p = params();
    const auto tr = correlation_trace(p, BathSpec::single(0.01, 0.0, 0.05), probe(p), 400.0, 2.0);
    const auto s = power_spectrum(tr);
    const auto ref = oracle::even_cosine_transform(tr.values, 2.0);
    REQUIRE(s.k.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(s.k[k] == near(ref[k], 1e-9).scale(1e-12 * ref[0]));
    CHECK(s.k[0] == near(2.0 * oracle::trapezoid(tr.values, 2.0), 1e-12));
    CHECK(s.omega[1] == near(M_PI / 400.0));
}

TEST_CASE("power spectrum of an exponential is Lorentzian") {
    const double d_m = 3.96e-5, rate = 0.01, h = 0.5;
    CorrelationTrace tr;
    for (int i = 0; i <= 1600 * 4; ++i) {
        tr.tau.push_back(i * h);
        tr.values.push_back(d_m * rate * std::exp(-rate * i * h));
    }
    const auto s = power_spectrum(tr);
    for (std::size_t k = 0; s.omega[k] <= 10.0 * rate; ++k)
        CHECK(s.k[k] == near(oracle::lorentzian(s.omega[k], d_m, rate), 0.01));
}

TEST_CASE("power spectrum input checks") {
    CorrelationTrace zero{{0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}};
    for (const double v : power_spectrum(zero).k) CHECK(v == 0.0);
    CorrelationTrace ragged{{0.0, 1.0, 2.5}, {1.0, 0.5, 0.2}};
    CHECK_THROWS_AS(power_spectrum(ragged), std::invalid_argument);
    CorrelationTrace tiny{{0.0}, {1.0}};
    CHECK_THROWS_AS(power_spectrum(tiny), std::invalid_argument);
}

TEST_CASE("Lorentzian fit recovers its own model class") {
    const auto s = exact_lorentzian(3.96e-5, 0.01, 801, M_PI);
    const auto fit = fit_lorentzian(s);
    CHECK(fit.d_m == near(3.96e-5, 1e-6));
    CHECK(fit.gamma == near(0.01, 1e-6));
    CHECK(fit.residual < 1e-6);
    CHECK(fit_lorentzian(s, 2.0).gamma == near(0.02, 1e-6));
}

TEST_CASE("Lorentzian fit rejects other shapes") {
    Spectrum gauss;
    for (int i = 0; i < 400; ++i) {
        const double w = 1e-3 * i;
        gauss.omega.push_back(w);
        gauss.k.push_back(std::exp(-0.5 * w * w / (0.02 * 0.02)) + 1e-12);
    }
    CHECK_THROWS_AS(fit_lorentzian(gauss), FitError);

    auto shifted = exact_lorentzian(1.0, 0.01, 200, 0.2);
    shifted.k[5] = 3.0;
    CHECK_THROWS_AS(fit_lorentzian(shifted), FitError);
}

TEST_CASE("fit of the propagated trace recovers Gamma") {
    const auto p = params();
    const auto bath = BathSpec::single(0.01, 0.0, 0.05);
    const auto fit = fit_lorentzian(power_spectrum(correlation_trace(p, bath, probe(p))));
    CHECK(fit.gamma >= 0.0095);
    CHECK(fit.gamma <= 0.0105);
    CHECK(fit.residual < 0.01);
}

TEST_CASE("property: spectral round trip on an x grid") {
    const auto p = params();
    for (const double gamma : {0.001, 0.01}) {
        const auto bath = BathSpec::single(gamma, 0.0, 0.05);
        for (int i = 0; i < 50; ++i) {
            const double x = -150.0 + 300.0 * i / 49.0;
            const auto amp = fitted_amplitude(p, bath, x, 1.0);
            CHECK(amp.source == AmplitudeSource::fitted);
            CHECK(amp.d_m == near(noise_amplitude_analytic(p, bath, x), 0.05));
            CHECK(amp.decay_rate * p.hbar == near(gamma, 0.1));
        }
    }
}

TEST_CASE("fitted amplitude of a pinned level is zero") {
    auto p = params();
    p.e_d = 100.0;
    const auto amp = fitted_amplitude(p, BathSpec::single(0.01, 0.0, 0.05), 0.0, 1.0);
    CHECK(amp.d_m == 0.0);
    CHECK(amp.decay_rate == near(0.01));
    const auto an = analytic_amplitude(p, BathSpec::single(0.01, 0.0, 0.05), 3.0);
    CHECK(an.source == AmplitudeSource::analytic);
    CHECK(an.evaluated_at_x == 3.0);
    CHECK(an.valid);
}

TEST_CASE("multi-peak kernel") {
    const SpectralPeak pk{0.003, 0.01, 3.96e-5};
    CHECK(multi_peak_kernel(pk.omega_n, {pk}) == near(2.0 * pk.d_m * pk.omega_n / pk.gamma));
    CHECK(multi_peak_kernel(0.002, {SpectralPeak{0.003, 0.01, 0.0}}) == 0.0);
    for (const double w : {0.0, 0.001, 0.003, 0.02})
        CHECK(multi_peak_kernel(w, {pk, pk}) == near(2.0 * multi_peak_kernel(w, {pk})));
    CHECK_THROWS_AS(multi_peak_kernel(0.1, {SpectralPeak{0.0, 0.01, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(multi_peak_kernel(0.1, {SpectralPeak{0.003, -1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("trace and spectrum CSV export") {
    CorrelationTrace tr{{0.0, 0.5}, {2.5e-7, 1.25e-7}};
    std::ostringstream a;
    write_csv(a, tr);
    CHECK(a.str() == "tau,value\n0,2.5e-07\n0.5,1.25e-07\n");
    std::ostringstream b;
    write_csv(b, power_spectrum(tr));
    CHECK(b.str().rfind("omega,K\n0,", 0) == 0);
}
