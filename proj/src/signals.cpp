#include "wrt/signals.hpp"

#include "wrt/error.hpp"
#include "wrt/fft.hpp"
#include "wrt/simd.hpp"

#include <algorithm>
#include <cmath>

namespace wrt {
namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw InvalidArgument("TimeSeries: length must be >= 1");
    if (!all_finite(samples_)) throw InvalidArgument("TimeSeries: non-finite sample");
}

TimeSeries TimeSeries::constant(std::size_t length, double value) {
    return TimeSeries(std::vector<double>(length, value));
}

bool TimeSeries::is_nonnegative() const noexcept {
    return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v >= 0.0; });
}

Kernel::Kernel(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2 || values_.size() % 2 != 0)
        throw InvalidArgument("Kernel: length must be even and >= 2, got " +
                              std::to_string(values_.size()));
    if (!all_finite(values_)) throw InvalidArgument("Kernel: non-finite value");
}

Kernel Kernel::zeros(std::size_t length) { return Kernel(std::vector<double>(length, 0.0)); }

Kernel Kernel::causal(std::span<const double> nonnegative) {
    std::vector<double> v(2 * nonnegative.size(), 0.0);
    std::copy(nonnegative.begin(), nonnegative.end(), v.begin() + static_cast<long>(nonnegative.size()));
    return Kernel(std::move(v));
}

double Kernel::at_lag(long lag) const noexcept {
    const long idx = lag - lag_offset();
    if (idx < 0 || idx >= static_cast<long>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(idx)];
}

bool Kernel::is_causal() const noexcept {
    const auto neg = std::span<const double>(values_).first(half_length());
    return std::all_of(neg.begin(), neg.end(), [](double v) { return v == 0.0; });
}

bool Kernel::is_nonnegative() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

DifferenceOperator::DifferenceOperator(std::size_t kernel_length) : cols_(kernel_length) {
    if (kernel_length < 2) throw InvalidArgument("DifferenceOperator: kernel length must be >= 2");
}

std::vector<double> DifferenceOperator::apply(std::span<const double> k) const {
    if (k.size() != cols_)
        throw InvalidArgument("apply_difference: operator expects length " + std::to_string(cols_) +
                              ", got " + std::to_string(k.size()));
    std::vector<double> out(rows());
    simd::adjacent_difference(k, out);
    return out;
}

double DifferenceOperator::energy(std::span<const double> k) const {
    if (k.size() != cols_) throw InvalidArgument("DifferenceOperator::energy: shape mismatch");
    return simd::adjacent_difference_energy(k);
}

std::vector<double> DifferenceOperator::to_dense() const {
    std::vector<double> m(rows() * cols_, 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        m[r * cols_ + r] = -1.0;
        m[r * cols_ + r + 1] = 1.0;
    }
    return m;
}

TimeSeries convolve(const TimeSeries& x, const Kernel& k) {
    const fft::LinearConvolver conv(x.values(), k.size());
    return TimeSeries(conv.convolve(k.values()));
}

void project_causal_nonneg(std::span<double> values) {
    if (values.size() % 2 != 0) throw InvalidArgument("project_causal_nonneg: odd kernel length");
    // blend with alpha = 1 is exactly the clamp; `to` may alias `out`.
    simd::blend_project(values, values, 1.0, values.size() / 2, values);
}

Kernel project_causal_nonneg(const Kernel& k) {
    std::vector<double> v = k.vector();
    project_causal_nonneg(v);
    return Kernel(std::move(v));
}

std::vector<double> apply_difference(const DifferenceOperator& d, const Kernel& k) {
    return d.apply(k.values());
}

} // namespace wrt
