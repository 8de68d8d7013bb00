#pragma once

// Per-trajectory steppers for the five methods:
//   ED     Ehrenfest, population from the master-equation rates
//   EF-LD  electronic-friction Langevin dynamics
//   M-ED   Ehrenfest plus Markovian random force
//   NM-ED  Ehrenfest plus colored (non-Markovian) random force
//   SH     surface hopping at master-equation rates
// Deterministic drift is advanced with RK4; noise enters as one additive
// momentum kick per step.

#include <cstddef>
#include <optional>
#include <string_view>

#include "ahdyn/model.hpp"
#include "ahdyn/noise.hpp"
#include "ahdyn/random.hpp"

namespace ahdyn {

enum class Method { ed, efld, med, nmed, sh };

inline constexpr Method all_methods[] = {Method::ed, Method::efld, Method::med, Method::nmed,
                                         Method::sh};

/// "ED", "EF-LD", "M-ED", "NM-ED", "SH".
std::string_view method_name(Method m) noexcept;
/// File-name friendly token: "ED", "EFLD", "MED", "NMED", "SH".
std::string_view method_token(Method m) noexcept;
/// Accepts either spelling, case-insensitive.
std::optional<Method> parse_method(std::string_view s) noexcept;

struct MethodConfig {
    Method method = Method::ed;
    double dt = 1.0;
    AmplitudeSource amplitude_source = AmplitudeSource::analytic;
    std::size_t update_stride = 1;

    /// Throws ConfigError for malformed values and StabilityError when
    /// (Gamma/hbar) dt violates the method's bound.
    void validate(const ModelParams& p, const BathSpec& bath) const;
};

enum class ElectronicVariable { none, population, surface };

struct TrajectoryState {
    double x = 0.0;
    double p = 0.0;
    double rho1 = 0.0;  // charged-state population (Ehrenfest family)
    Surface surface = Surface::neutral;  // active surface (SH)
    ColoredNoiseState noise;             // NM-ED only
    NoiseAmplitude amplitude;            // cached D_M for M-ED / NM-ED
    ElectronicVariable live = ElectronicVariable::none;
    double t = 0.0;
};

/// Set the electronic variable for a fresh (x, p): rho1 = f(h(x)) for the
/// Ehrenfest family, surface 1 with probability f(h(x)) for SH, and for NM-ED
/// xi_N drawn from its stationary distribution.
void initialize_electronic(TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                           const MethodConfig& cfg, RandomStream& rng);

TrajectoryState step_ed(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                        const MethodConfig& cfg);
TrajectoryState step_efld(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                          const MethodConfig& cfg, RandomStream& rng);
TrajectoryState step_med(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                         const MethodConfig& cfg, RandomStream& rng);
TrajectoryState step_nmed(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                          const MethodConfig& cfg, RandomStream& rng);
TrajectoryState step_sh(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                        const MethodConfig& cfg, RandomStream& rng);

/// Dispatch on cfg.method.
TrajectoryState step(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                     const MethodConfig& cfg, RandomStream& rng);

/// Hop test at the current x: one uniform draw, hop iff u < rate * dt.
/// Momentum is left unchanged.
TrajectoryState sh_hop(TrajectoryState s, const ModelParams& p, const BathSpec& bath, double dt,
                       RandomStream& rng);

/// RK4 step of d rho1/dt = (Gamma/hbar)[f(1 - rho1) - (1 - f) rho1] at fixed x.
double ehrenfest_population_step(double rho1, double x, const ModelParams& p, const BathSpec& bath,
                                 double dt);

/// Refresh the cached amplitude at the current x if it is stale.
void refresh_amplitude(TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                       const MethodConfig& cfg);

double kinetic_energy(const TrajectoryState& s, const ModelParams& p) noexcept;

/// Neutral-surface energy p^2/2m + U_0(x).
double bare_energy(const TrajectoryState& s, const ModelParams& p) noexcept;

/// Method-specific impurity population: rho1, f(h(x)), or the surface indicator.
/// Throws std::invalid_argument if the state does not carry that method's variable.
double population(const TrajectoryState& s, Method m, const ModelParams& p, const BathSpec& bath);

/// Left-lead current estimator (Gamma_L/hbar)[f_L(h)(1 - n) - (1 - f_L(h)) n].
/// Throws std::invalid_argument for a single-lead bath.
double current_contribution(const TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                            Method m);

}  // namespace ahdyn
