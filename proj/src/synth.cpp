#include "wrt/synth.hpp"

#include "wrt/error.hpp"
#include "wrt/fft.hpp"
#include "wrt/simd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace wrt::synth {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Distinct deterministic streams for the stable noise and the Gaussian noise.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

// Circular convolution of `a` with the real, even filter `w` (both length n).
std::vector<double> circular_filter(std::span<const double> a, std::span<const double> w) {
    const std::size_t n = a.size();
    auto fa = fft::forward(a, n);
    const auto fw = fft::forward(w, n);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fw[i];
    return fft::inverse(fa, n);
}

} // namespace

void MultifractalParams::validate() const {
    if (!(alpha_levy > 0.0 && alpha_levy <= 2.0))
        throw InvalidArgument("multifractal: alpha_levy must lie in (0, 2]");
    if (!(C1 > 0.0)) throw InvalidArgument("multifractal: C1 must be > 0");
    if (!std::isfinite(H)) throw InvalidArgument("multifractal: H must be finite");
    if (alpha_levy == 1.0)
        throw Unsupported("multifractal: alpha_levy = 1 (log-stable case) is not supported");
}

double MultifractalParams::moment_scaling(double q) const {
    return C1 * (std::pow(q, alpha_levy) - q) / (alpha_levy - 1.0);
}

void KernelSpec::validate() const {
    if (!(beta_a > 0.0) || !(beta_b > 0.0))
        throw InvalidArgument("kernel spec: Beta shape parameters must be > 0");
    if (support_length < 2) throw InvalidArgument("kernel spec: support_length must be >= 2");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw InvalidArgument("kernel spec: amplitude must be > 0");
}

std::vector<double> extremal_levy(double alpha, std::size_t n, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0)
        throw InvalidArgument("extremal_levy: alpha must lie in (0, 2] and differ from 1");
    auto rng = stream(seed, 0x4c657679ULL);
    std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
    std::exponential_distribution<double> expo(1.0);

    constexpr double beta = -1.0;
    const double zeta = -beta * std::tan(kPi * alpha / 2);
    const double xi = std::atan(-zeta) / alpha;
    const double scale = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha));

    std::vector<double> out(n);
    for (double& v : out) {
        double V = angle(rng);
        while (V <= -kPi / 2) V = angle(rng);
        double W = expo(rng);
        while (W <= 0.0) W = expo(rng);
        const double a = alpha * (V + xi);
        v = scale * std::sin(a) / std::pow(std::cos(V), 1.0 / alpha) *
            std::pow(std::cos(V - a) / W, (1.0 - alpha) / alpha);
    }
    return out;
}

std::vector<double> simulate_flux(const MultifractalParams& params, std::size_t T,
                                  std::uint64_t seed) {
    params.validate();
    if (T < 64 || !is_pow2(T))
        throw InvalidArgument("simulate_rainfall: T must be a power of two >= 64, got " +
                              std::to_string(T));
    const double a = params.alpha_levy;

    // Two-sided singular filter |t|^(-1/a) on the circle. Its a-th power sums
    // to ~2 ln T, hence the factor 1/2 in the noise scale below.
    std::vector<double> w(T);
    for (std::size_t i = 0; i < T; ++i) {
        const double t = static_cast<double>(std::min(i, T - i));
        w[i] = std::pow(std::max(t, 1.0), -1.0 / a);
    }
    // log E[exp(q S sigma)] = -sigma^a q^a / cos(pi a / 2) for the extremal
    // stable law; matching C1 / (a - 1) per unit log scale fixes sigma.
    const double sigma =
        std::pow(-std::cos(kPi * a / 2) * params.C1 / (2.0 * (a - 1.0)), 1.0 / a);

    const auto noise = extremal_levy(a, T, seed);
    auto gen = circular_filter(noise, w);
    // Zero DC gain: remove the mean of the generator.
    const double mean = simd::sum(gen) / static_cast<double>(T);
    for (double& g : gen) g = sigma * (g - mean);

    // The unit-mean normalization below is invariant to a constant shift of
    // the generator; shifting by its maximum keeps exp() finite even when a
    // heavy-tailed Levy sample dominates the mean.
    const double top = *std::max_element(gen.begin(), gen.end());
    std::vector<double> flux(T);
    for (std::size_t i = 0; i < T; ++i) flux[i] = std::exp(gen[i] - top);
    const double fmean = simd::sum(flux) / static_cast<double>(T);
    if (!(fmean > 0.0) || !std::isfinite(fmean))
        throw NumericalFailure("simulate_flux: degenerate cascade normalization");
    for (double& f : flux) f /= fmean;
    return flux;
}

TimeSeries simulate_rainfall(const MultifractalParams& params, std::size_t T, std::uint64_t seed) {
    const auto flux = simulate_flux(params, T, seed);
    auto spec = fft::forward(flux, T);
    // Fractional integration of order H; DC gain 1 keeps the mean.
    for (std::size_t k = 1; k < spec.size(); ++k) {
        const double omega = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(T);
        spec[k] *= std::pow(omega, -params.H);
    }
    auto rain = fft::inverse(spec, T);
    for (double& r : rain) r = std::max(r, 0.0);
    return TimeSeries(std::move(rain));
}

Kernel make_beta_kernel(const KernelSpec& spec) {
    spec.validate();
    const std::size_t L = spec.support_length;
    std::vector<double> density(L);
    for (std::size_t i = 0; i < L; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(L);
        // Unnormalized Beta density; the constant cancels below.
        density[i] = std::exp((spec.beta_a - 1.0) * std::log(u) + (spec.beta_b - 1.0) * std::log1p(-u));
    }
    const double total = simd::sum(density);
    for (double& d : density) d = d / total * spec.amplitude;
    return Kernel::causal(density);
}

Scenario synthesize_observation(const TimeSeries& x, const Kernel& k_true, double c_true,
                                double input_snr_db, std::uint64_t seed) {
    if (std::isnan(input_snr_db) || input_snr_db == -std::numeric_limits<double>::infinity())
        throw InvalidArgument("synthesize_observation: input SNR must be finite or +inf");
    if (!std::isfinite(c_true)) throw InvalidArgument("synthesize_observation: c must be finite");

    std::vector<double> clean = convolve(x, k_true).vector();
    for (double& v : clean) v += c_true;
    const std::size_t T = clean.size();

    if (std::isinf(input_snr_db)) {
        TimeSeries yc(clean);
        return Scenario{x, k_true, c_true, yc, yc, 0.0, input_snr_db, seed};
    }

    const double energy = simd::squared_norm(clean);
    if (!(energy > 0.0))
        throw InvalidArgument("synthesize_observation: zero-energy output, SNR cannot be calibrated");

    auto rng = stream(seed, 0x4e6f697365ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(T);
    for (double& n : noise) n = gauss(rng);
    const double drawn = simd::squared_norm(noise);
    if (!(drawn > 0.0)) throw NumericalFailure("synthesize_observation: degenerate noise draw");
    // 20 log10(||y||^2 / ||n||^2) = snr  =>  ||n||^2 = ||y||^2 10^(-snr/20)
    const double target = energy * std::pow(10.0, -input_snr_db / 20.0);
    const double gain = std::sqrt(target / drawn);
    std::vector<double> noisy(T);
    double noise_energy = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double n = gain * noise[t];
        noisy[t] = clean[t] + n;
        noise_energy += n * n;
    }
    return Scenario{x,
                    k_true,
                    c_true,
                    TimeSeries(std::move(clean)),
                    TimeSeries(std::move(noisy)),
                    noise_energy / static_cast<double>(T),
                    input_snr_db,
                    seed};
}

} // namespace wrt::synth
