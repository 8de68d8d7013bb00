#pragma once

// Trajectory ensembles: Boltzmann initial conditions, independent per-trajectory
// random streams, and order-fixed reduction into per-frame means and standard
// errors. run_ensemble is the OpenMP kernel; run_ensemble_serial is the plain
// reference loop it is tested against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ahdyn/dynamics.hpp"
#include "ahdyn/model.hpp"

namespace ahdyn {

struct EnsembleConfig {
    std::size_t n_traj = 5000;
    double t_final = 20000.0;
    std::size_t record_stride = 0;  // 0: choose so that at most 2000 frames are emitted
    std::uint64_t seed = 1;
    double init_temperature = 0.25;  // 5 kT at kT = 0.05

    void validate() const;
    std::size_t n_steps(double dt) const;
    std::size_t stride(double dt) const;
};

struct ObservableFrame {
    double t = 0.0;
    double mean_ke = 0.0;
    double sem_ke = 0.0;
    double mean_pop = 0.0;
    double sem_pop = 0.0;
    std::optional<double> mean_current;
    std::optional<double> sem_current;
};

/// x ~ N(0, T/(m w^2)), p ~ N(0, m T), then the electronic variable per method.
TrajectoryState sample_initial(const ModelParams& p, const BathSpec& bath, const MethodConfig& mc,
                               const EnsembleConfig& ec, RandomStream& rng);

/// Parallel ensemble run. `workers` = 0 uses the OpenMP default. Output is
/// bitwise independent of the worker count. Stepper stability errors are
/// rethrown with the lowest failing trajectory index attached.
std::vector<ObservableFrame> run_ensemble(const ModelParams& p, const BathSpec& bath,
                                          const MethodConfig& mc, const EnsembleConfig& ec,
                                          int workers = 0);

/// Single-threaded reference with straightforward index-order accumulation.
std::vector<ObservableFrame> run_ensemble_serial(const ModelParams& p, const BathSpec& bath,
                                                 const MethodConfig& mc, const EnsembleConfig& ec);

struct RelaxationFit {
    double tau = 0.0;
    double ke_inf = 0.0;
    double ke_0 = 0.0;
};

/// Fit KE(t) = KE_inf + (KE_0 - KE_inf) exp(-t/tau). Throws FitError when the
/// kinetic energy does not decay (it grows, or no decay is resolved in the window).
RelaxationFit relaxation_time(const std::vector<ObservableFrame>& frames);

}  // namespace ahdyn
