#pragma once
// Core signal types: uniformly sampled series, two-sided kernels, the
// first-order difference operator, linear convolution and the projection onto
// causal nonnegative kernels.

#include <cstddef>
#include <span>
#include <vector>

namespace wrt {

// Uniformly sampled real signal, unit sampling step, length >= 1, finite.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> samples);

    static TimeSeries constant(std::size_t length, double value);

    std::size_t size() const noexcept { return samples_.size(); }
    std::span<const double> values() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    const std::vector<double>& vector() const noexcept { return samples_; }

    bool is_nonnegative() const noexcept;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> samples_;
};

// Two-sided impulse response with K (even) entries; entry j holds lag j - K/2,
// so lags run -K/2 ... K/2 - 1.
class Kernel {
public:
    explicit Kernel(std::vector<double> values);

    static Kernel zeros(std::size_t length);
    // Kernel of total length 2 * nonnegative.size() with zeros on negative lags.
    static Kernel causal(std::span<const double> nonnegative);

    std::size_t size() const noexcept { return values_.size(); }
    std::size_t half_length() const noexcept { return values_.size() / 2; }
    long lag_offset() const noexcept { return -static_cast<long>(half_length()); }
    long lag_of(std::size_t index) const noexcept {
        return static_cast<long>(index) + lag_offset();
    }
    // Entry at `lag`, or 0 outside the stored range.
    double at_lag(long lag) const noexcept;

    std::span<const double> values() const noexcept { return values_; }
    // Lags 0 ... K/2 - 1.
    std::span<const double> nonnegative_lags() const noexcept {
        return std::span<const double>(values_).subspan(half_length());
    }
    const std::vector<double>& vector() const noexcept { return values_; }

    bool is_causal() const noexcept;
    bool is_nonnegative() const noexcept;

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::vector<double> values_;
};

// First-order forward differences, shape (K-1) x K, no wrap-around row.
class DifferenceOperator {
public:
    explicit DifferenceOperator(std::size_t kernel_length);

    std::size_t rows() const noexcept { return cols_ - 1; }
    std::size_t cols() const noexcept { return cols_; }

    std::vector<double> apply(std::span<const double> k) const;
    // ||D k||^2
    double energy(std::span<const double> k) const;
    // Row-major dense copy, rows() x cols().
    std::vector<double> to_dense() const;

private:
    std::size_t cols_;
};

TimeSeries convolve(const TimeSeries& x, const Kernel& k);

Kernel project_causal_nonneg(const Kernel& k);
// In-place form on raw kernel storage of even length.
void project_causal_nonneg(std::span<double> values);

std::vector<double> apply_difference(const DifferenceOperator& d, const Kernel& k);

} // namespace wrt
