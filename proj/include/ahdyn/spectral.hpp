#pragma once

// Numerical route to the random-force kernel: propagate the surface-resolved
// force fluctuations with the master-equation rates, transform the resulting
// correlation function, and fit a Lorentzian to recover (D_M, Gamma').

#include <ostream>
#include <vector>

#include "ahdyn/model.hpp"
#include "ahdyn/noise.hpp"

namespace ahdyn {

struct CorrelationTrace {
    std::vector<double> tau;
    std::vector<double> values;
};

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> k;
};

struct SpectralFit {
    double d_m = 0.0;
    double gamma = 0.0;  // Gamma' as an energy (hbar times the fitted rate)
    double residual = 0.0;
};

/// <dF(0) dF(tau)> at fixed x on tau = 0, dt, ..., tau_max. Throws
/// std::invalid_argument if dt > (hbar/Gamma)/10 (kernel under-resolved).
CorrelationTrace correlation_trace(const ModelParams& p, const BathSpec& bath, double x,
                                   double tau_max, double dt);

/// Trace on the default grid: tau_max = 8 hbar/Gamma, step min(dt, (hbar/Gamma)/50).
CorrelationTrace correlation_trace(const ModelParams& p, const BathSpec& bath, double x,
                                   double dt = 1.0);

/// Fourier transform of the even extension of a uniformly sampled trace.
/// omega_k = pi k / tau_max, k = 0..n-1; K(0) is twice the trapezoid integral.
Spectrum power_spectrum(const CorrelationTrace& trace);

/// Least-squares fit of K(w) = 2 D' G'^2 / (w^2 + G'^2) on the log spectrum.
/// Throws FitError when the peak is not at w = 0 or the relative residual exceeds 0.1.
/// `hbar` converts the fitted rate into an energy.
SpectralFit fit_lorentzian(const Spectrum& spectrum, double hbar = 1.0);

struct SpectralPeak {
    double omega_n;
    double gamma;
    double d_m;
};

/// Sum over peaks of 2 D_M Gamma w_n^3 / ((w^2 - w_n^2)^2 + (w Gamma)^2).
double multi_peak_kernel(double omega, const std::vector<SpectralPeak>& peaks);

/// Noise amplitude from the full numerical route at position x.
NoiseAmplitude fitted_amplitude(const ModelParams& p, const BathSpec& bath, double x, double dt);

/// Analytic amplitude at x with decay rate Gamma/hbar.
NoiseAmplitude analytic_amplitude(const ModelParams& p, const BathSpec& bath, double x);

void write_csv(std::ostream& os, const CorrelationTrace& trace);
void write_csv(std::ostream& os, const Spectrum& spectrum);

}  // namespace ahdyn
