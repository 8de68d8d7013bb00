#include "ahdyn/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ahdyn/errors.hpp"
#include "ahdyn/spectral.hpp"

namespace ahdyn {

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::ed: return "ED";
        case Method::efld: return "EF-LD";
        case Method::med: return "M-ED";
        case Method::nmed: return "NM-ED";
        case Method::sh: return "SH";
    }
    return "?";
}

std::string_view method_token(Method m) noexcept {
    switch (m) {
        case Method::ed: return "ED";
        case Method::efld: return "EFLD";
        case Method::med: return "MED";
        case Method::nmed: return "NMED";
        case Method::sh: return "SH";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
    std::string key;
    for (char c : s) {
        if (c == '-' || c == '_') continue;
        key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (Method m : all_methods) {
        if (key == method_token(m)) return m;
    }
    return std::nullopt;
}

void MethodConfig::validate(const ModelParams& p, const BathSpec& bath) const {
    std::vector<std::string> issues;
    if (!(dt > 0.0) || !std::isfinite(dt)) issues.push_back("dynamics.dt: must be > 0");
    if (update_stride < 1) issues.push_back("dynamics.update_stride: must be >= 1");
    if (!issues.empty()) throw ConfigError(std::move(issues));

    const double z = bath.total_gamma() / p.hbar * dt;
    const auto fail = [&](const char* bound) {
        throw StabilityError(std::string(method_name(method)) + ": (Gamma/hbar)*dt = " +
                             std::to_string(z) + " violates " + bound);
    };
    switch (method) {
        case Method::sh:
            if (!(z < 0.1)) fail("(Gamma/hbar)*dt < 0.1 required for hop probabilities");
            break;
        case Method::nmed:
            if (!(z < 1.0)) fail("(Gamma/hbar)*dt < 1 required for the colored-noise update");
            break;
        case Method::ed:
        case Method::med:
            if (!(z <= 1.0)) fail("(Gamma/hbar)*dt <= 1 required for the population update");
            break;
        case Method::efld: break;
    }
}

namespace {

// f(h) and df/dh with a single exponential per lead.
struct Occupancy {
    double f;
    double dfdh;
};

Occupancy occupancy(const BathSpec& bath, double h) noexcept {
    double f = 0.0, dfdh = 0.0;
    const double gsum = bath.total_gamma();
    for (const auto& l : bath.leads) {
        const double z = (h - l.mu) / bath.kT;
        const double e = std::exp(-std::abs(z));
        const double fl = z >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
        const double w = l.gamma / gsum;
        f += w * fl;
        dfdh -= w * e / ((1.0 + e) * (1.0 + e)) / bath.kT;
    }
    return {f, dfdh};
}

struct Phase {
    double x, p, rho;
};

// Classical RK4 over (x, p, rho) with a derivative functor returning Phase.
template <class Deriv>
Phase rk4(const Phase& y, double dt, Deriv&& d) {
    const Phase k1 = d(y);
    const Phase k2 = d({y.x + 0.5 * dt * k1.x, y.p + 0.5 * dt * k1.p, y.rho + 0.5 * dt * k1.rho});
    const Phase k3 = d({y.x + 0.5 * dt * k2.x, y.p + 0.5 * dt * k2.p, y.rho + 0.5 * dt * k2.rho});
    const Phase k4 = d({y.x + dt * k3.x, y.p + dt * k3.p, y.rho + dt * k3.rho});
    return {y.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            y.p + dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
            y.rho + dt / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho)};
}

// Mean-field drift: rho0 dU0/dx + rho1 dU1/dx = dU0/dx + rho1 dh/dx.
TrajectoryState ehrenfest_drift(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                                double dt) {
    const double k = p.mass * p.omega * p.omega;
    const double slope = level_slope(p);
    const double rate = bath.total_gamma() / p.hbar;
    const double inv_m = 1.0 / p.mass;
    const auto deriv = [&](const Phase& y) {
        const double f = occupancy(bath, p.e_d + slope * y.x).f;
        return Phase{y.p * inv_m, -k * y.x - y.rho * slope, rate * (f - y.rho)};
    };
    const Phase y = rk4(Phase{s.x, s.p, s.rho1}, dt, deriv);
    s.x = y.x;
    s.p = y.p;
    s.rho1 = y.rho;
    return s;
}

void check_live(const TrajectoryState& s, ElectronicVariable expected, Method m) {
    if (s.live != expected)
        throw std::invalid_argument("state does not carry the electronic variable of " +
                                    std::string(method_name(m)));
}

}  // namespace

void refresh_amplitude(TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                       const MethodConfig& cfg) {
    if (!s.amplitude.stale(cfg.update_stride)) return;
    s.amplitude = cfg.amplitude_source == AmplitudeSource::fitted
                      ? fitted_amplitude(p, bath, s.x, cfg.dt)
                      : analytic_amplitude(p, bath, s.x);
}

void initialize_electronic(TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                           const MethodConfig& cfg, RandomStream& rng) {
    const double f = fermi_effective(bath, level(p, s.x));
    s.amplitude = NoiseAmplitude{};
    s.noise = ColoredNoiseState{};
    s.rho1 = 0.0;
    s.surface = Surface::neutral;
    switch (cfg.method) {
        case Method::efld: s.live = ElectronicVariable::none; break;
        case Method::sh:
            s.live = ElectronicVariable::surface;
            s.surface = rng.unit() < f ? Surface::charged : Surface::neutral;
            break;
        case Method::ed:
        case Method::med:
            s.live = ElectronicVariable::population;
            s.rho1 = f;
            break;
        case Method::nmed:
            s.live = ElectronicVariable::population;
            s.rho1 = f;
            refresh_amplitude(s, p, bath, cfg);
            s.noise = ou_stationary_sample(s.amplitude.d_m, s.amplitude.decay_rate, cfg.dt, rng);
            break;
    }
}

TrajectoryState step_ed(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                        const MethodConfig& cfg) {
    s = ehrenfest_drift(s, p, bath, cfg.dt);
    s.t += cfg.dt;
    return s;
}

TrajectoryState step_efld(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                          const MethodConfig& cfg, RandomStream& rng) {
    const double k = p.mass * p.omega * p.omega;
    const double slope = level_slope(p);
    const double fric_scale = -(p.hbar / bath.total_gamma()) * slope * slope;
    const double inv_m = 1.0 / p.mass;
    const double d_m = noise_amplitude_analytic(p, bath, s.x);

    const auto deriv = [&](const Phase& y) {
        const Occupancy occ = occupancy(bath, p.e_d + slope * y.x);
        const double force = -k * y.x - slope * occ.f;
        const double gamma = fric_scale * occ.dfdh;
        return Phase{y.p * inv_m, force - gamma * y.p * inv_m, 0.0};
    };
    const Phase y = rk4(Phase{s.x, s.p, 0.0}, cfg.dt, deriv);
    s.x = y.x;
    s.p = y.p + sample_white(d_m, cfg.dt, rng) * cfg.dt;
    s.t += cfg.dt;
    return s;
}

TrajectoryState step_med(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                         const MethodConfig& cfg, RandomStream& rng) {
    refresh_amplitude(s, p, bath, cfg);
    s = ehrenfest_drift(s, p, bath, cfg.dt);
    s.p += sample_white(s.amplitude.d_m, cfg.dt, rng) * cfg.dt;
    ++s.amplitude.age_steps;
    s.t += cfg.dt;
    return s;
}

TrajectoryState step_nmed(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                          const MethodConfig& cfg, RandomStream& rng) {
    refresh_amplitude(s, p, bath, cfg);
    s = ehrenfest_drift(s, p, bath, cfg.dt);
    const double xi_m = sample_white(s.amplitude.d_m, cfg.dt, rng);
    s.noise = ou_step(s.noise, xi_m, s.amplitude.decay_rate, cfg.dt);
    s.p += s.noise.xi_n * cfg.dt;
    ++s.amplitude.age_steps;
    s.t += cfg.dt;
    return s;
}

TrajectoryState sh_hop(TrajectoryState s, const ModelParams& p, const BathSpec& bath, double dt,
                       RandomStream& rng) {
    const double f = fermi_effective(bath, level(p, s.x));
    const double rate = bath.total_gamma() / p.hbar;
    const double u = rng.unit();
    if (s.surface == Surface::neutral) {
        if (u < rate * f * dt) s.surface = Surface::charged;
    } else {
        if (u < rate * (1.0 - f) * dt) s.surface = Surface::neutral;
    }
    return s;
}

TrajectoryState step_sh(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                        const MethodConfig& cfg, RandomStream& rng) {
    const double k = p.mass * p.omega * p.omega;
    const double shift = occupation(s.surface) * level_slope(p);
    const double inv_m = 1.0 / p.mass;
    const auto deriv = [&](const Phase& y) { return Phase{y.p * inv_m, -k * y.x - shift, 0.0}; };
    const Phase y = rk4(Phase{s.x, s.p, 0.0}, cfg.dt, deriv);
    s.x = y.x;
    s.p = y.p;
    s = sh_hop(s, p, bath, cfg.dt, rng);
    s.t += cfg.dt;
    return s;
}

TrajectoryState step(TrajectoryState s, const ModelParams& p, const BathSpec& bath,
                     const MethodConfig& cfg, RandomStream& rng) {
    switch (cfg.method) {
        case Method::ed: return step_ed(s, p, bath, cfg);
        case Method::efld: return step_efld(s, p, bath, cfg, rng);
        case Method::med: return step_med(s, p, bath, cfg, rng);
        case Method::nmed: return step_nmed(s, p, bath, cfg, rng);
        case Method::sh: return step_sh(s, p, bath, cfg, rng);
    }
    return s;
}

double ehrenfest_population_step(double rho1, double x, const ModelParams& p, const BathSpec& bath,
                                 double dt) {
    const double f = fermi_effective(bath, level(p, x));
    const double rate = bath.total_gamma() / p.hbar;
    const auto deriv = [&](const Phase& y) { return Phase{0.0, 0.0, rate * (f - y.rho)}; };
    return rk4(Phase{x, 0.0, rho1}, dt, deriv).rho;
}

double kinetic_energy(const TrajectoryState& s, const ModelParams& p) noexcept {
    return s.p * s.p / (2.0 * p.mass);
}

double bare_energy(const TrajectoryState& s, const ModelParams& p) noexcept {
    return kinetic_energy(s, p) + potential(p, Surface::neutral, s.x);
}

double population(const TrajectoryState& s, Method m, const ModelParams& p, const BathSpec& bath) {
    switch (m) {
        case Method::efld:
            check_live(s, ElectronicVariable::none, m);
            return fermi_effective(bath, level(p, s.x));
        case Method::sh:
            check_live(s, ElectronicVariable::surface, m);
            return static_cast<double>(occupation(s.surface));
        case Method::ed:
        case Method::med:
        case Method::nmed:
            check_live(s, ElectronicVariable::population, m);
            return s.rho1;
    }
    return 0.0;
}

double current_contribution(const TrajectoryState& s, const ModelParams& p, const BathSpec& bath,
                            Method m) {
    if (!bath.two_leads())
        throw std::invalid_argument("current_contribution: requires a two-lead bath");
    const Lead& left = bath.leads[0];
    const double n = population(s, m, p, bath);
    const double fl = fermi(level(p, s.x), left.mu, bath.kT);
    return left.gamma / p.hbar * (fl * (1.0 - n) - (1.0 - fl) * n);
}

}  // namespace ahdyn
