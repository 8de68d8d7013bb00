#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace ahdyn::detail {

namespace {

enum class PlanKind { r2c, c2r };

std::mutex plan_mutex;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

// Plans live for the process lifetime; FFTW plans are immutable once created
// and the new-array execute functions may be called concurrently.
fftw_plan cached_plan(PlanKind kind, int n) {
    static std::map<std::pair<PlanKind, int>, fftw_plan> plans;
    std::lock_guard lock(plan_mutex);
    auto it = plans.find({kind, n});
    if (it != plans.end()) return it->second;

    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    std::vector<double> in(static_cast<std::size_t>(n));
    switch (kind) {
        case PlanKind::r2c: {
            std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
            plan = fftw_plan_dft_r2c_1d(n, in.data(), as_fftw(out.data()), flags);
            break;
        }
        case PlanKind::c2r: {
            std::vector<std::complex<double>> cin(static_cast<std::size_t>(n / 2 + 1));
            plan = fftw_plan_dft_c2r_1d(n, as_fftw(cin.data()), in.data(), flags);
            break;
        }
    }
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans.emplace(std::pair{kind, n}, plan);
    return plan;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::vector<double> dct1(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("dct1: need at least 2 samples");
    // DCT-I as the real DFT of the even extension; FFTW's estimated r2c plans
    // are considerably faster than its estimated REDFT00 plans.
    const std::size_t n = x.size();
    const std::size_t m = 2 * (n - 1);
    thread_local std::vector<double> buf;
    thread_local std::vector<std::complex<double>> spec;
    buf.resize(m);
    spec.resize(m / 2 + 1);
    std::copy(x.begin(), x.end(), buf.begin());
    for (std::size_t k = 1; k + 1 < n; ++k) buf[m - k] = x[k];
    fftw_execute_dft_r2c(cached_plan(PlanKind::r2c, static_cast<int>(m)), buf.data(),
                         as_fftw(spec.data()));
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = spec[k].real();
    return out;
}

std::vector<double> autocorrelation_sums(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = next_pow2(x.size() + max_lag + 1);
    std::vector<double> buf(n, 0.0);
    std::copy(x.begin(), x.end(), buf.begin());
    std::vector<std::complex<double>> spec(n / 2 + 1);

    fftw_execute_dft_r2c(cached_plan(PlanKind::r2c, static_cast<int>(n)), buf.data(),
                         as_fftw(spec.data()));
    for (auto& c : spec) c = std::norm(c);
    fftw_execute_dft_c2r(cached_plan(PlanKind::c2r, static_cast<int>(n)), as_fftw(spec.data()),
                         buf.data());

    std::vector<double> sums(std::min(max_lag + 1, x.size()));
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] = buf[k] / static_cast<double>(n);
    return sums;
}

}  // namespace ahdyn::detail
