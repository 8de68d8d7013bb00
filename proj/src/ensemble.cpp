#include "ahdyn/ensemble.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "ahdyn/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ahdyn {

void EnsembleConfig::validate() const {
    std::vector<std::string> issues;
    if (n_traj < 1) issues.push_back("ensemble.n_traj: must be >= 1");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) issues.push_back("ensemble.t_final: must be > 0");
    if (!(init_temperature > 0.0) || !std::isfinite(init_temperature))
        issues.push_back("ensemble.init_temperature: must be > 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::size_t EnsembleConfig::n_steps(double dt) const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

std::size_t EnsembleConfig::stride(double dt) const {
    if (record_stride > 0) return record_stride;
    const std::size_t n = n_steps(dt);
    return std::max<std::size_t>(1, (n + 1998) / 1999);
}

TrajectoryState sample_initial(const ModelParams& p, const BathSpec& bath, const MethodConfig& mc,
                               const EnsembleConfig& ec, RandomStream& rng) {
    TrajectoryState s;
    const double sx = std::sqrt(ec.init_temperature / (p.mass * p.omega * p.omega));
    const double sp = std::sqrt(p.mass * ec.init_temperature);
    s.x = sx * rng.gaussian();
    s.p = sp * rng.gaussian();
    s.t = 0.0;
    initialize_electronic(s, p, bath, mc, rng);
    return s;
}

namespace {

// Per-frame running sums: (ke, ke^2, pop, pop^2, current, current^2).
constexpr std::size_t kSlots = 6;

struct Sums {
    std::vector<double> v;
    explicit Sums(std::size_t frames) : v(frames * kSlots, 0.0) {}
    double* frame(std::size_t i) { return v.data() + i * kSlots; }
};

struct RunShape {
    std::size_t n_steps;
    std::size_t stride;
    std::size_t n_frames;
};

RunShape shape_of(const MethodConfig& mc, const EnsembleConfig& ec) {
    const std::size_t n = ec.n_steps(mc.dt);
    const std::size_t s = ec.stride(mc.dt);
    return {n, s, n / s + 1};
}

// Integrate trajectory `index` and add its observables into `sums`.
void simulate_trajectory(std::size_t index, const ModelParams& p, const BathSpec& bath,
                         const MethodConfig& mc, const EnsembleConfig& ec, const RunShape& shape,
                         Sums& sums) {
    auto rng = RandomStream::for_trajectory(ec.seed, index);
    TrajectoryState s = sample_initial(p, bath, mc, ec, rng);
    const bool with_current = bath.two_leads();
    for (std::size_t k = 0;; ++k) {
        if (k % shape.stride == 0) {
            double* f = sums.frame(k / shape.stride);
            const double ke = kinetic_energy(s, p);
            const double pop = population(s, mc.method, p, bath);
            f[0] += ke;
            f[1] += ke * ke;
            f[2] += pop;
            f[3] += pop * pop;
            if (with_current) {
                const double c = current_contribution(s, p, bath, mc.method);
                f[4] += c;
                f[5] += c * c;
            }
        }
        if (k == shape.n_steps) break;
        s = step(s, p, bath, mc, rng);
        s.t = static_cast<double>(k + 1) * mc.dt;
    }
}

std::vector<ObservableFrame> finalize(const Sums& sums, const RunShape& shape, std::size_t n,
                                      double dt, bool with_current) {
    std::vector<ObservableFrame> frames(shape.n_frames);
    const double nd = static_cast<double>(n);
    const auto stat = [nd](double s, double sq, double& mean, double& sem) {
        mean = s / nd;
        if (nd < 2.0) {
            sem = 0.0;
            return;
        }
        const double var = std::max(0.0, (sq - s * mean) / (nd - 1.0));
        sem = std::sqrt(var / nd);
    };
    for (std::size_t i = 0; i < shape.n_frames; ++i) {
        const double* f = sums.v.data() + i * kSlots;
        auto& out = frames[i];
        out.t = static_cast<double>(i * shape.stride) * dt;
        stat(f[0], f[1], out.mean_ke, out.sem_ke);
        stat(f[2], f[3], out.mean_pop, out.sem_pop);
        if (with_current) {
            double m, se;
            stat(f[4], f[5], m, se);
            out.mean_current = m;
            out.sem_current = se;
        }
    }
    return frames;
}

void validate_run(const ModelParams& p, const BathSpec& bath, const MethodConfig& mc,
                  const EnsembleConfig& ec) {
    p.validate();
    bath.validate();
    ec.validate();
    mc.validate(p, bath);
}

// Trajectories are reduced in fixed blocks whose boundaries depend only on
// n_traj; blocks are merged in index order.
std::size_t block_size(std::size_t n_traj) {
    return std::max<std::size_t>(16, (n_traj + 255) / 256);
}

}  // namespace

std::vector<ObservableFrame> run_ensemble(const ModelParams& p, const BathSpec& bath,
                                          const MethodConfig& mc, const EnsembleConfig& ec,
                                          int workers) {
    validate_run(p, bath, mc, ec);
    const RunShape shape = shape_of(mc, ec);
    const std::size_t bsize = block_size(ec.n_traj);
    const std::size_t n_blocks = (ec.n_traj + bsize - 1) / bsize;

    std::vector<Sums> partial(n_blocks, Sums(shape.n_frames));
    std::vector<std::exception_ptr> errors(n_blocks);
    std::vector<std::size_t> error_index(n_blocks, 0);

#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
        const auto ub = static_cast<std::size_t>(b);
        const std::size_t first = ub * bsize;
        const std::size_t last = std::min(ec.n_traj, first + bsize);
        for (std::size_t i = first; i < last; ++i) {
            try {
                simulate_trajectory(i, p, bath, mc, ec, shape, partial[ub]);
            } catch (...) {
                errors[ub] = std::current_exception();
                error_index[ub] = i;
                break;
            }
        }
    }
    (void)workers;

    for (std::size_t b = 0; b < n_blocks; ++b) {
        if (!errors[b]) continue;
        try {
            std::rethrow_exception(errors[b]);
        } catch (const StabilityError& e) {
            throw StabilityError(e.what(), error_index[b]);
        }
    }

    Sums total(shape.n_frames);
    for (const auto& part : partial) {
        for (std::size_t j = 0; j < total.v.size(); ++j) total.v[j] += part.v[j];
    }
    return finalize(total, shape, ec.n_traj, mc.dt, bath.two_leads());
}

std::vector<ObservableFrame> run_ensemble_serial(const ModelParams& p, const BathSpec& bath,
                                                 const MethodConfig& mc, const EnsembleConfig& ec) {
    validate_run(p, bath, mc, ec);
    const RunShape shape = shape_of(mc, ec);
    Sums total(shape.n_frames);
    for (std::size_t i = 0; i < ec.n_traj; ++i) {
        try {
            simulate_trajectory(i, p, bath, mc, ec, shape, total);
        } catch (const StabilityError& e) {
            throw StabilityError(e.what(), i);
        }
    }
    return finalize(total, shape, ec.n_traj, mc.dt, bath.two_leads());
}

RelaxationFit relaxation_time(const std::vector<ObservableFrame>& frames) {
    if (frames.size() < 4) throw FitError("relaxation_time: need at least 4 frames");
    const double t0 = frames.front().t;
    const double span = frames.back().t - t0;
    if (!(span > 0.0)) throw FitError("relaxation_time: frames do not span any time");

    // For fixed tau the model is linear in (KE_inf, amplitude).
    struct Linear {
        double c, a, ssr;
    };
    const auto solve = [&](double tau) {
        double s1 = 0, se = 0, see = 0, sy = 0, sey = 0;
        for (const auto& f : frames) {
            const double e = std::exp(-(f.t - t0) / tau);
            s1 += 1.0;
            se += e;
            see += e * e;
            sy += f.mean_ke;
            sey += e * f.mean_ke;
        }
        const double det = s1 * see - se * se;
        Linear l{};
        l.a = (s1 * sey - se * sy) / det;
        l.c = (sy - l.a * se) / s1;
        for (const auto& f : frames) {
            const double r = l.c + l.a * std::exp(-(f.t - t0) / tau) - f.mean_ke;
            l.ssr += r * r;
        }
        return l;
    };

    const double dt_min = (frames[1].t - frames[0].t);
    const double lo = std::log(0.5 * dt_min);
    const double hi = std::log(20.0 * span);
    constexpr int grid = 240;
    int best = 0;
    double best_ssr = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double u = lo + (hi - lo) * i / grid;
        const double ssr = solve(std::exp(u)).ssr;
        if (ssr < best_ssr) {
            best_ssr = ssr;
            best = i;
        }
    }
    const double step = (hi - lo) / grid;
    const double a = lo + step * std::max(0, best - 1);
    const double b = lo + step * std::min(grid, best + 1);
    const auto [u, ssr] = boost::math::tools::brent_find_minima(
        [&](double uu) { return solve(std::exp(uu)).ssr; }, a, b, 40);
    (void)ssr;

    const double tau = std::exp(u);
    const Linear l = solve(tau);
    if (!(l.a > 0.0))
        throw FitError("relaxation_time: kinetic energy is not decaying (fitted amplitude " +
                       std::to_string(l.a) + ")");
    if (tau > 2.0 * span)
        throw FitError("relaxation_time: no decay resolved within the time window");
    return RelaxationFit{tau, l.c, l.c + l.a};
}

}  // namespace ahdyn
