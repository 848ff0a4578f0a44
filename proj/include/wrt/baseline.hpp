#pragma once
// Cross-correlation estimator of the transfer function, rescaled so the
// reconstruction has the standard deviation of the observed output. The
// result is not projected onto causal nonnegative kernels.

#include "wrt/solver.hpp"

namespace wrt::baseline {

enum class Normalization { biased, unbiased };

struct XcorrConfig {
    std::size_t K = 1000;  // lags -K/2 ... K/2-1
    bool demean = true;
    Normalization normalization = Normalization::biased;
};

// R_xy[j] = (1/T) sum_t x[t] y[t + lag_j] (after optional mean removal);
// unbiased normalization divides by T - |lag| instead.
std::vector<double> cross_correlation(const TimeSeries& x, const TimeSeries& y,
                                      const XcorrConfig& config);

DeconvResult xcorr_estimate(const TimeSeries& x, const TimeSeries& y, const XcorrConfig& config);

} // namespace wrt::baseline
