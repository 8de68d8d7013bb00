#pragma once

// Anderson-Holstein impurity model: one electronic level h(x) linearly coupled
// to a harmonic nuclear mode and hybridized with one or two wide-band leads.
//
// Units: hbar = m = 1 by default; energies are dimensionless and time is
// measured in hbar/energy.

#include <cstdint>
#include <vector>

namespace ahdyn {

struct ModelParams {
    double mass = 1.0;
    double omega = 0.003;
    double g = 0.02;
    double e_d = 0.02 * 0.02 / (2.0 * 0.003);  // g^2 / (2 hbar omega)
    double hbar = 1.0;

    /// Throws ConfigError listing every violated invariant.
    void validate() const;
};

struct Lead {
    double gamma = 0.01;  // hybridization Gamma_lead
    double mu = 0.0;      // chemical potential
};

struct BathSpec {
    std::vector<Lead> leads{Lead{}};
    double kT = 0.05;

    double total_gamma() const noexcept;
    bool two_leads() const noexcept { return leads.size() == 2; }
    void validate() const;

    static BathSpec single(double gamma, double mu, double kT);
    /// Symmetric junction: Gamma_L = Gamma_R = gamma/2, mu_L = -mu_R = mu_left.
    static BathSpec symmetric_junction(double gamma, double mu_left, double kT);
};

enum class Surface : std::uint8_t { neutral = 0, charged = 1 };

inline int occupation(Surface s) noexcept { return s == Surface::charged ? 1 : 0; }

/// U_0(x) for the neutral surface, U_0(x) + h(x) for the charged one.
double potential(const ModelParams& p, Surface s, double x) noexcept;

/// Impurity level h(x) = E_d + g x sqrt(2 m omega / hbar).
double level(const ModelParams& p, double x) noexcept;

/// dh/dx, constant in x.
double level_slope(const ModelParams& p) noexcept;

/// dU_0/dx = m omega^2 x.
double harmonic_gradient(const ModelParams& p, double x) noexcept;

/// Fermi-Dirac occupation, evaluated without overflow for any (e - mu)/kT.
double fermi(double energy, double mu, double kT) noexcept;

/// Gamma-weighted mean of the lead Fermi functions; the plain Fermi function for one lead.
double fermi_effective(const BathSpec& bath, double energy) noexcept;

/// d f_eff / d energy (non-positive).
double fermi_effective_derivative(const BathSpec& bath, double energy) noexcept;

/// Adiabatic mean force -dU_0/dx - (dh/dx) f(h).
double mean_force(const ModelParams& p, const BathSpec& bath, double x) noexcept;

/// Electronic friction -(hbar/Gamma) (d f(h)/dx) (dh/dx), via the chain rule.
double friction(const ModelParams& p, const BathSpec& bath, double x) noexcept;

/// Markovian noise amplitude D_M = (hbar/Gamma) f(1-f) (dh/dx)^2.
double noise_amplitude_analytic(const ModelParams& p, const BathSpec& bath, double x) noexcept;

}  // namespace ahdyn
