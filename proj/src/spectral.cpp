#include "ahdyn/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ahdyn/csv.hpp"
#include "ahdyn/errors.hpp"
#include "fft.hpp"

namespace ahdyn {

CorrelationTrace correlation_trace(const ModelParams& p, const BathSpec& bath, double x,
                                   double tau_max, double dt) {
    const double rate = bath.total_gamma() / p.hbar;
    if (!(dt > 0.0) || !(tau_max > 0.0))
        throw std::invalid_argument("correlation_trace: dt and tau_max must be > 0");
    if (dt > 0.1 / rate)
        throw std::invalid_argument("correlation_trace: dt = " + std::to_string(dt) +
                                    " under-resolves the kernel time hbar/Gamma = " +
                                    std::to_string(1.0 / rate));

    const double f = fermi_effective(bath, level(p, x));
    const auto [df0, df1] = force_fluctuations(p, bath, x);

    // G_zeta(tau) = dF_zeta rho_ss,zeta propagated by the frozen-x rate matrix
    //   dG0/dtau = -rate f G0 + rate (1-f) G1,  dG1/dtau = -dG0/dtau.
    auto deriv = [&](const std::array<double, 2>& g) {
        const double flow = rate * (f * g[0] - (1.0 - f) * g[1]);
        return std::array<double, 2>{-flow, flow};
    };
    auto rk4 = [&](const std::array<double, 2>& g) {
        const auto k1 = deriv(g);
        const auto k2 = deriv({g[0] + 0.5 * dt * k1[0], g[1] + 0.5 * dt * k1[1]});
        const auto k3 = deriv({g[0] + 0.5 * dt * k2[0], g[1] + 0.5 * dt * k2[1]});
        const auto k4 = deriv({g[0] + dt * k3[0], g[1] + dt * k3[1]});
        std::array<double, 2> out;
        for (int c = 0; c < 2; ++c) out[c] = g[c] + dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        return out;
    };
    // The system is linear with constant coefficients, so one RK4 step is a
    // fixed 2x2 map; build it from the basis vectors once.
    const auto col0 = rk4({1.0, 0.0});
    const auto col1 = rk4({0.0, 1.0});

    const auto n = static_cast<std::size_t>(std::floor(tau_max / dt + 0.5)) + 1;
    CorrelationTrace out;
    out.tau.resize(n);
    out.values.resize(n);
    double g0 = df0 * (1.0 - f);
    double g1 = df1 * f;
    for (std::size_t i = 0; i < n; ++i) {
        out.tau[i] = static_cast<double>(i) * dt;
        out.values[i] = df0 * g0 + df1 * g1;
        const double n0 = col0[0] * g0 + col1[0] * g1;
        const double n1 = col0[1] * g0 + col1[1] * g1;
        g0 = n0;
        g1 = n1;
    }
    return out;
}

CorrelationTrace correlation_trace(const ModelParams& p, const BathSpec& bath, double x, double dt) {
    const double kernel_time = p.hbar / bath.total_gamma();
    const double step = std::min(dt, kernel_time / 50.0);
    const double tau_max = 8.0 * kernel_time;
    // Snap tau_max onto the grid so the trace ends exactly there.
    return correlation_trace(p, bath, x, std::ceil(tau_max / step - 1e-9) * step, step);
}

Spectrum power_spectrum(const CorrelationTrace& trace) {
    const std::size_t n = trace.tau.size();
    if (n < 2 || trace.values.size() != n)
        throw std::invalid_argument("power_spectrum: need >= 2 samples with matching grids");
    const double d = trace.tau[1] - trace.tau[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((trace.tau[i] - trace.tau[i - 1]) - d) > 1e-9 * d)
            throw std::invalid_argument("power_spectrum: tau grid is not uniform");
    }
    const auto y = detail::dct1(trace.values);
    Spectrum out;
    out.omega.resize(n);
    out.k.resize(n);
    const double span = static_cast<double>(n - 1) * d;
    for (std::size_t i = 0; i < n; ++i) {
        out.omega[i] = M_PI * static_cast<double>(i) / span;
        out.k[i] = d * y[i];
    }
    return out;
}

namespace {

struct FitWindow {
    std::vector<double> omega;
    std::vector<double> log_k;
    std::vector<double> k;
};

// log K(w) for parameters (a, b) with D = a^2, G = b^2.
double log_model(double w, double a, double b) {
    const double b2 = b * b;
    return std::log(2.0) + 2.0 * std::log(std::abs(a)) + 4.0 * std::log(std::abs(b)) -
           std::log(w * w + b2 * b2);
}

double cost(const FitWindow& win, double a, double b) {
    const double b2 = b * b;
    const double offset = log_model(0.0, a, b) + std::log(b2 * b2);
    double c = 0.0;
    for (std::size_t i = 0; i < win.omega.size(); ++i) {
        const double w = win.omega[i];
        const double r = offset - std::log(w * w + b2 * b2) - win.log_k[i];
        c += r * r;
    }
    return c;
}

}  // namespace

SpectralFit fit_lorentzian(const Spectrum& s, double hbar) {
    const std::size_t n = s.omega.size();
    if (n < 3 || s.k.size() != n) throw FitError("fit_lorentzian: spectrum too short");
    const double k0 = s.k[0];
    if (!(k0 > 0.0)) throw FitError("fit_lorentzian: non-positive zero-frequency value");
    if (*std::max_element(s.k.begin(), s.k.end()) > k0)
        throw FitError("fit_lorentzian: spectrum maximum is not at zero frequency");

    // Half width at half maximum by linear interpolation.
    double hwhm = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        if (s.k[i] < 0.5 * k0) {
            const double t = (s.k[i - 1] - 0.5 * k0) / (s.k[i - 1] - s.k[i]);
            hwhm = s.omega[i - 1] + t * (s.omega[i] - s.omega[i - 1]);
            break;
        }
    }
    if (!(hwhm > 0.0)) throw FitError("fit_lorentzian: spectrum never falls to half maximum");

    FitWindow win;
    const double w_max = 10.0 * hwhm;
    for (std::size_t i = 0; i < n && s.omega[i] <= w_max; ++i) {
        if (!(s.k[i] > 0.0)) continue;
        win.omega.push_back(s.omega[i]);
        win.k.push_back(s.k[i]);
        win.log_k.push_back(std::log(s.k[i]));
    }
    if (win.omega.size() < 3) throw FitError("fit_lorentzian: fewer than 3 points in fit window");

    // Damped Gauss-Newton (Levenberg-Marquardt) in (a, b).
    double a = std::sqrt(0.5 * k0);
    double b = std::sqrt(hwhm);
    double lambda = 1e-3;
    double c = cost(win, a, b);
    for (int iter = 0; iter < 200; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        const double b2 = b * b;
        const double offset = log_model(0.0, a, b) + std::log(b2 * b2);
        for (std::size_t i = 0; i < win.omega.size(); ++i) {
            const double w = win.omega[i];
            const double r = offset - std::log(w * w + b2 * b2) - win.log_k[i];
            const double ja = 2.0 / a;
            const double jb = 4.0 / b - 4.0 * b2 * b / (w * w + b2 * b2);
            jtj00 += ja * ja;
            jtj01 += ja * jb;
            jtj11 += jb * jb;
            jtr0 += ja * r;
            jtr1 += jb * r;
        }
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            const double m00 = jtj00 * (1.0 + lambda);
            const double m11 = jtj11 * (1.0 + lambda);
            const double det = m00 * m11 - jtj01 * jtj01;
            const double da = -(m11 * jtr0 - jtj01 * jtr1) / det;
            const double db = -(m00 * jtr1 - jtj01 * jtr0) / det;
            const double c_new = cost(win, a + da, b + db);
            if (c_new <= c && std::isfinite(c_new)) {
                const bool converged = (std::abs(da) <= 1e-12 * std::abs(a) &&
                                        std::abs(db) <= 1e-12 * std::abs(b)) ||
                                       c - c_new <= 1e-15 * c;
                a += da;
                b += db;
                c = c_new;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                if (converged) iter = 200;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;
    }

    SpectralFit fit;
    fit.d_m = a * a;
    const double rate = b * b;
    fit.gamma = hbar * rate;

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < win.omega.size(); ++i) {
        const double w = win.omega[i];
        const double model = 2.0 * fit.d_m * rate * rate / (w * w + rate * rate);
        num += (model - win.k[i]) * (model - win.k[i]);
        den += win.k[i] * win.k[i];
    }
    fit.residual = std::sqrt(num / den);
    if (!(fit.d_m > 0.0) || !(rate > 0.0) || !std::isfinite(fit.residual))
        throw FitError("fit_lorentzian: fit did not converge to positive parameters");
    if (fit.residual > 0.1)
        throw FitError("fit_lorentzian: spectrum is not Lorentzian (relative residual " +
                       std::to_string(fit.residual) + ")");
    return fit;
}

double multi_peak_kernel(double omega, const std::vector<SpectralPeak>& peaks) {
    double sum = 0.0;
    for (const auto& pk : peaks) {
        if (!(pk.omega_n > 0.0) || !(pk.gamma > 0.0))
            throw std::invalid_argument("multi_peak_kernel: omega_n and gamma must be > 0");
        const double w2 = omega * omega;
        const double wn2 = pk.omega_n * pk.omega_n;
        const double den = (w2 - wn2) * (w2 - wn2) + w2 * pk.gamma * pk.gamma;
        sum += 2.0 * pk.d_m * pk.gamma * wn2 * pk.omega_n / den;
    }
    return sum;
}

NoiseAmplitude fitted_amplitude(const ModelParams& p, const BathSpec& bath, double x, double dt) {
    NoiseAmplitude amp;
    amp.source = AmplitudeSource::fitted;
    amp.evaluated_at_x = x;
    amp.valid = true;
    const auto trace = correlation_trace(p, bath, x, dt);
    if (trace.values.front() <= 0.0) {
        // Level pinned at 0 or 1 (or g = 0): nothing fluctuates.
        amp.d_m = 0.0;
        amp.decay_rate = bath.total_gamma() / p.hbar;
        return amp;
    }
    const auto fit = fit_lorentzian(power_spectrum(trace), p.hbar);
    amp.d_m = fit.d_m;
    amp.decay_rate = fit.gamma / p.hbar;
    return amp;
}

NoiseAmplitude analytic_amplitude(const ModelParams& p, const BathSpec& bath, double x) {
    NoiseAmplitude amp;
    amp.d_m = noise_amplitude_analytic(p, bath, x);
    amp.decay_rate = bath.total_gamma() / p.hbar;
    amp.source = AmplitudeSource::analytic;
    amp.evaluated_at_x = x;
    amp.valid = true;
    return amp;
}

void write_csv(std::ostream& os, const CorrelationTrace& trace) {
    csv::write_columns(os, {"tau", "value"}, {trace.tau, trace.values});
}

void write_csv(std::ostream& os, const Spectrum& spectrum) {
    csv::write_columns(os, {"omega", "K"}, {spectrum.omega, spectrum.k});
}

}  // namespace ahdyn
