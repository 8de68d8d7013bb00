#pragma once

// Thin FFTW wrappers. Plan creation is serialized; execution is reentrant.

#include <span>
#include <vector>

namespace ahdyn::detail {

/// Type-I DCT (FFTW REDFT00): Y_k = X_0 + (-1)^k X_{n-1} + 2 sum_{j=1}^{n-2} X_j cos(pi j k/(n-1)).
/// Equals the DFT of the even extension of X. Requires n >= 2.
std::vector<double> dct1(std::span<const double> x);

/// Linear (non-circular) autocorrelation sums S_k = sum_j x_j x_{j+k} for k = 0..max_lag.
std::vector<double> autocorrelation_sums(std::span<const double> x, std::size_t max_lag);

}  // namespace ahdyn::detail
