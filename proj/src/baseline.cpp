#include "wrt/baseline.hpp"

#include "wrt/error.hpp"
#include "wrt/simd.hpp"

#include <cmath>
#include <cstdlib>

namespace wrt::baseline {
namespace {

double mean(std::span<const double> v) { return simd::sum(v) / static_cast<double>(v.size()); }

double population_std(std::span<const double> v) {
    const double m = mean(v);
    double acc = 0.0;
    for (double a : v) acc += (a - m) * (a - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

std::vector<double> cross_correlation(const TimeSeries& x, const TimeSeries& y,
                                      const XcorrConfig& config) {
    if (x.size() != y.size()) throw InvalidArgument("xcorr: x and y must have the same length");
    if (config.K < 2 || config.K % 2 != 0) throw InvalidArgument("xcorr: K must be even and >= 2");
    const std::size_t T = x.size();
    std::vector<double> xs = x.vector(), ys = y.vector();
    if (config.demean) {
        const double mx = mean(xs), my = mean(ys);
        for (double& v : xs) v -= mx;
        for (double& v : ys) v -= my;
    }
    // X^T y with X the convolution operator of x is exactly sum_t x[t] y[t + lag].
    const fft::LinearConvolver conv(xs, config.K);
    auto r = conv.correlate(ys);
    const long half = static_cast<long>(config.K / 2);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const long lag = static_cast<long>(j) - half;
        double denom = static_cast<double>(T);
        if (config.normalization == Normalization::unbiased) {
            const long overlap = static_cast<long>(T) - std::labs(lag);
            denom = overlap > 0 ? static_cast<double>(overlap) : 1.0;
        }
        r[j] /= denom;
    }
    return r;
}

DeconvResult xcorr_estimate(const TimeSeries& x, const TimeSeries& y, const XcorrConfig& config) {
    const auto r = cross_correlation(x, y, config);
    const fft::LinearConvolver conv(x.values(), config.K);
    const auto y_rec0 = conv.convolve(r);
    const double s_rec = population_std(y_rec0);
    if (!(s_rec > 0.0) || !std::isfinite(s_rec))
        throw NumericalFailure("xcorr: reconstruction has zero variance, amplitude rescale undefined");
    const double gain = population_std(y.values()) / s_rec;

    std::vector<double> k(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) k[j] = r[j] * gain;
    auto xk = conv.convolve(k);
    std::vector<double> res(xk.size());
    simd::residual(y.values(), xk, 0.0, res);
    const double c = mean(res);
    for (double& v : xk) v += c;

    DeconvResult out{Kernel(std::move(k)), c, TimeSeries(std::move(xk)), {}, 0, true,
                     Termination::not_iterative, 0.0, true, {}};
    out.iterates_feasible = out.k_est.is_causal() && out.k_est.is_nonnegative();
    return out;
}

} // namespace wrt::baseline
