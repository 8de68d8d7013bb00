#include "ahdyn/model.hpp"

#include <cmath>
#include <string>

#include "ahdyn/errors.hpp"

namespace ahdyn {

void ModelParams::validate() const {
    std::vector<std::string> issues;
    if (!(mass > 0.0) || !std::isfinite(mass)) issues.push_back("model.mass: must be > 0");
    if (!(omega > 0.0) || !std::isfinite(omega)) issues.push_back("model.omega: must be > 0");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) issues.push_back("model.hbar: must be > 0");
    if (!std::isfinite(g)) issues.push_back("model.g: must be finite");
    if (!std::isfinite(e_d)) issues.push_back("model.e_d: must be finite");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

double BathSpec::total_gamma() const noexcept {
    double sum = 0.0;
    for (const auto& l : leads) sum += l.gamma;
    return sum;
}

void BathSpec::validate() const {
    std::vector<std::string> issues;
    if (leads.empty() || leads.size() > 2)
        issues.push_back("bath.leads: need 1 or 2 leads, got " + std::to_string(leads.size()));
    for (std::size_t i = 0; i < leads.size(); ++i) {
        const std::string path = "bath.leads[" + std::to_string(i) + "]";
        if (!(leads[i].gamma > 0.0) || !std::isfinite(leads[i].gamma))
            issues.push_back(path + ".gamma: must be > 0");
        if (!std::isfinite(leads[i].mu)) issues.push_back(path + ".mu: must be finite");
    }
    if (!(kT > 0.0) || !std::isfinite(kT)) issues.push_back("bath.kT: must be > 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

BathSpec BathSpec::single(double gamma, double mu, double kT) {
    return BathSpec{{Lead{gamma, mu}}, kT};
}

BathSpec BathSpec::symmetric_junction(double gamma, double mu_left, double kT) {
    return BathSpec{{Lead{0.5 * gamma, mu_left}, Lead{0.5 * gamma, -mu_left}}, kT};
}

double level_slope(const ModelParams& p) noexcept {
    return p.g * std::sqrt(2.0 * p.mass * p.omega / p.hbar);
}

double level(const ModelParams& p, double x) noexcept { return p.e_d + level_slope(p) * x; }

double harmonic_gradient(const ModelParams& p, double x) noexcept {
    return p.mass * p.omega * p.omega * x;
}

double potential(const ModelParams& p, Surface s, double x) noexcept {
    const double u0 = 0.5 * p.mass * p.omega * p.omega * x * x;
    return s == Surface::charged ? u0 + level(p, x) : u0;
}

double fermi(double energy, double mu, double kT) noexcept {
    const double z = (energy - mu) / kT;
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

namespace {

// f(1-f) in the same overflow-free form: e^{-|z|} / (1 + e^{-|z|})^2.
double fermi_variance(double energy, double mu, double kT) noexcept {
    const double e = std::exp(-std::abs((energy - mu) / kT));
    return e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

double fermi_effective(const BathSpec& bath, double energy) noexcept {
    if (bath.leads.size() == 1) return fermi(energy, bath.leads[0].mu, bath.kT);
    double weighted = 0.0;
    for (const auto& l : bath.leads) weighted += l.gamma * fermi(energy, l.mu, bath.kT);
    return weighted / bath.total_gamma();
}

double fermi_effective_derivative(const BathSpec& bath, double energy) noexcept {
    double weighted = 0.0;
    for (const auto& l : bath.leads) weighted += l.gamma * fermi_variance(energy, l.mu, bath.kT);
    return -weighted / (bath.total_gamma() * bath.kT);
}

double mean_force(const ModelParams& p, const BathSpec& bath, double x) noexcept {
    return -harmonic_gradient(p, x) - level_slope(p) * fermi_effective(bath, level(p, x));
}

double friction(const ModelParams& p, const BathSpec& bath, double x) noexcept {
    const double slope = level_slope(p);
    // d f(h)/dx = f'(h) dh/dx
    const double dfdx = fermi_effective_derivative(bath, level(p, x)) * slope;
    return -(p.hbar / bath.total_gamma()) * dfdx * slope;
}

double noise_amplitude_analytic(const ModelParams& p, const BathSpec& bath, double x) noexcept {
    const double slope = level_slope(p);
    const double h = level(p, x);
    double occ_var;
    if (bath.leads.size() == 1) {
        occ_var = fermi_variance(h, bath.leads[0].mu, bath.kT);
    } else {
        const double f = fermi_effective(bath, h);
        occ_var = f * (1.0 - f);
    }
    return (p.hbar / bath.total_gamma()) * occ_var * slope * slope;
}

}  // namespace ahdyn
