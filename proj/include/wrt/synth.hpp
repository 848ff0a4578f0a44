#pragma once
// Synthetic scenarios: universal-multifractal rainfall, Beta-shaped
// ground-truth kernels and Gaussian noise calibrated to an input SNR.

#include "wrt/signals.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace wrt::synth {

// Universal multifractal parameters.
struct MultifractalParams {
    double H = -0.1;          // nonconservation exponent
    double C1 = 0.4;          // codimension of the mean, > 0
    double alpha_levy = 0.7;  // Levy index in (0, 2], != 1

    void validate() const;
    // Moment scaling function of the flux, K(q) = C1 (q^a - q) / (a - 1).
    double moment_scaling(double q) const;
};

struct KernelSpec {
    double beta_a = 2.0;
    double beta_b = 6.0;
    std::size_t support_length = 500;  // number of nonnegative lags (K/2)
    double amplitude = 1.0;            // total mass after normalization

    void validate() const;
};

struct Scenario {
    TimeSeries x;
    Kernel k_true;
    double c_true;
    TimeSeries y_clean;
    TimeSeries y_noisy;
    double noise_variance;  // ||n||^2 / T
    double input_snr_db;
    std::uint64_t seed;
};

inline constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

// Maximally left-skewed (beta = -1) standard alpha-stable variates,
// Chambers-Mallows-Stuck construction. alpha != 1.
std::vector<double> extremal_levy(double alpha, std::size_t n, std::uint64_t seed);

// Normalized flux of the cascade stage (unit sample mean), length T.
std::vector<double> simulate_flux(const MultifractalParams& params, std::size_t T,
                                  std::uint64_t seed);

// Rainfall series: flux, fractional integration of order H, negatives clipped.
// T must be a power of two and >= 64.
TimeSeries simulate_rainfall(const MultifractalParams& params, std::size_t T, std::uint64_t seed);

Kernel make_beta_kernel(const KernelSpec& spec);

// input_snr_db may be kNoiseFree.
Scenario synthesize_observation(const TimeSeries& x, const Kernel& k_true, double c_true,
                                double input_snr_db, std::uint64_t seed);

} // namespace wrt::synth
