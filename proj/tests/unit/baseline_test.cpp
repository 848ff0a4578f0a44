#include "oracles.hpp"
#include "support.hpp"

#include "wrt/baseline.hpp"
#include "wrt/error.hpp"
#include "wrt/select.hpp"
#include "wrt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace wrt;

namespace {

double pop_std(std::span<const double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

long argmax_lag(const Kernel& k) {
    const auto v = k.values();
    return k.lag_of(static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin()));
}

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (double& a : v) a = g(rng);
    return v;
}

} // namespace

TEST_CASE("cross-correlation matches a direct sum") {
    std::mt19937_64 rng(51);
    const std::size_t T = 90, K = 20;
    const auto x = test::random_vector(rng, T);
    const auto y = test::random_vector(rng, T);
    for (auto norm : {baseline::Normalization::biased, baseline::Normalization::unbiased}) {
        for (bool demean : {true, false}) {
            const auto r = baseline::cross_correlation(TimeSeries(x), TimeSeries(y), {K, demean, norm});
            const double mx = demean ? std::accumulate(x.begin(), x.end(), 0.0) / T : 0.0;
            const double my = demean ? std::accumulate(y.begin(), y.end(), 0.0) / T : 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                const long lag = static_cast<long>(j) - static_cast<long>(K / 2);
                double acc = 0.0;
                for (long t = 0; t < static_cast<long>(T); ++t) {
                    const long s = t + lag;
                    if (s >= 0 && s < static_cast<long>(T)) acc += (x[t] - mx) * (y[s] - my);
                }
                const double denom = norm == baseline::Normalization::biased
                                         ? static_cast<double>(T)
                                         : static_cast<double>(static_cast<long>(T) - std::labs(lag));
                CHECK(r[j] == doctest::Approx(acc / denom).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("identity system peaks at lag zero") {
    std::mt19937_64 rng(52);
    const auto x = gaussian(rng, 2048);
    const auto r = baseline::xcorr_estimate(TimeSeries(x), TimeSeries(x), {64});
    CHECK(argmax_lag(r.k_est) == 0);
}

TEST_CASE("white input recovers the kernel peak and the amplitude contract") {
    std::mt19937_64 rng(53);
    const auto x = gaussian(rng, 4096);
    const auto k = synth::make_beta_kernel({2.0, 6.0, 60, 1.0});
    const auto y = convolve(TimeSeries(x), k);
    const auto r = baseline::xcorr_estimate(TimeSeries(x), y, {120});
    CHECK(std::abs(argmax_lag(r.k_est) - argmax_lag(k)) <= 1);
    const auto xk = convolve(TimeSeries(x), r.k_est);
    CHECK(pop_std(xk.values()) == doctest::Approx(pop_std(y.values())).epsilon(1e-8));
    // The estimate is not projected, so it keeps acausal lobes.
    CHECK_FALSE(r.k_est.is_causal());
    CHECK_FALSE(r.iterates_feasible);
    auto z = oracle::naive_convolve(x, r.k_est.vector());
    for (double& v : z) v += r.c_est;
    CHECK(oracle::relative_error(z, r.y_rec.vector()) < 1e-10);
}

TEST_CASE("delaying the output shifts the peak") {
    std::mt19937_64 rng(54);
    const auto x = gaussian(rng, 4096);
    const auto k = synth::make_beta_kernel({2.0, 6.0, 60, 1.0});
    const auto y = convolve(TimeSeries(x), k);
    const long base = argmax_lag(baseline::xcorr_estimate(TimeSeries(x), y, {120}).k_est);
    for (long d : {3L, 7L}) {
        std::vector<double> shifted(y.size(), 0.0);
        for (std::size_t t = static_cast<std::size_t>(d); t < y.size(); ++t) shifted[t] = y[t - static_cast<std::size_t>(d)];
        const auto r = baseline::xcorr_estimate(TimeSeries(x), TimeSeries(shifted), {120});
        CHECK(argmax_lag(r.k_est) == base + d);
    }
}

TEST_CASE("degenerate inputs") {
    const auto x = TimeSeries::constant(64, 2.0);
    std::mt19937_64 rng(55);
    const auto y = test::random_vector(rng, 64);
    CHECK_THROWS_AS(baseline::xcorr_estimate(x, TimeSeries(y), {16}), NumericalFailure);
    CHECK_THROWS_AS(baseline::xcorr_estimate(TimeSeries(y), TimeSeries(y), {15}), InvalidArgument);
    CHECK_THROWS_AS(baseline::xcorr_estimate(TimeSeries(y), TimeSeries::constant(63, 1.0), {16}), InvalidArgument);
}

TEST_CASE("multifractal input: regularized solver beats cross-correlation") {
    const auto x = synth::simulate_rainfall({}, 1024, 56);
    const auto k = synth::make_beta_kernel({2.0, 6.0, 100, 1000.0});
    const auto sc = synth::synthesize_observation(x, k, 100.0, 20.0, 56);
    const auto xr = baseline::xcorr_estimate(x, sc.y_noisy, {200});
    const auto report = select::sweep(x, sc.y_noisy, 200, select::LambdaGrid::log_spaced(1e-2, 1e8, 6),
                                      SolverConfig{}, &k);
    const auto best = select::select_lambda(report, select::Strategy::oracle);
    for (const auto& e : report.entries)
        if (e.result) test::check_solver_output(*e.result);
    CHECK(select::snr_db(k.values(), xr.k_est.values()) < best.criterion_value);
}
