#pragma once
// Monte-Carlo benchmark: for every (series length, input SNR, trial) draw a
// fresh rainfall series and noisy observation of a fixed Beta kernel, sweep
// lambda, apply the four selection strategies and the cross-correlation
// baseline, and tabulate kernel SNRs.

#include "wrt/select.hpp"
#include "wrt/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace wrt::bench {

struct BenchSpec {
    std::vector<double> snr_levels_db{0, 5, 10, 15, 20, 25, 30};
    int trials = 30;
    std::vector<std::size_t> lengths{1000, 5000};
    std::size_t kernel_support = 500;  // K = 2 * kernel_support
    select::LambdaGrid grid = select::LambdaGrid::synthetic_default();
    synth::MultifractalParams rain;
    double beta_a = 2.0;
    double beta_b = 6.0;
    // Kernel mass. With c = 100 a unit-mass kernel is buried under the offset
    // once noise is calibrated on the whole output.
    double amplitude = 1000.0;
    double c_true = 100.0;
    std::uint64_t seed = 1;
    SolverConfig solver;
    bool include_xcorr = true;
    unsigned threads = 1;  // 0 = hardware concurrency

    void validate() const;
    synth::KernelSpec kernel_spec() const;
};

// One row per (trial, method). method is a strategy name or "xcorr".
struct TrialRecord {
    std::size_t length = 0;
    double snr_db = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string method;
    double lambda = 0.0;  // NaN for xcorr
    double k_snr_db = 0.0;
    double y_rec_snr_db = 0.0;
    double corr_coeff = 0.0;
    double c_est = 0.0;
    bool converged = false;
    int iterations = 0;
    bool feasible = true;
    bool ok = true;
    std::string error;
};

struct TrialTiming {
    std::size_t length;
    double snr_db;
    int trial;
    double sweep_seconds;
    double xcorr_seconds;
};

struct BenchResult {
    std::vector<TrialRecord> records;  // deterministic order
    std::vector<TrialTiming> timings;
    std::size_t trials_total = 0;
    std::size_t trials_failed = 0;

    double failure_fraction() const noexcept {
        return trials_total == 0 ? 0.0
                                 : static_cast<double>(trials_failed) / static_cast<double>(trials_total);
    }
};

struct AggregateRow {
    std::size_t length;
    double snr_db;
    std::string method;
    std::size_t n;
    double mean;
    double stddev;  // sample standard deviation, NaN when n < 2
};

struct LambdaRow {
    std::size_t length;
    double snr_db;
    std::string method;
    std::size_t n;
    double mean_lambda;
    double mean_log10_lambda;
};

std::uint64_t trial_seed(std::uint64_t base, std::size_t length, double snr_db, int trial);

// Rainfall of arbitrary length: the prefix of a power-of-two simulation.
TimeSeries rainfall(const synth::MultifractalParams& params, std::size_t T, std::uint64_t seed);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

BenchResult run_bench(const BenchSpec& spec, const Progress& progress = {});

std::vector<AggregateRow> aggregate_k_snr(const BenchResult& result);
std::vector<LambdaRow> aggregate_lambda(const BenchResult& result);

// trials.csv, k_snr_vs_level.csv, lambda_vs_level.csv, k_snr_vs_length.csv,
// timing.csv. Everything but timing.csv is a pure function of the BenchSpec.
void write_outputs(const std::filesystem::path& dir, const BenchResult& result);

} // namespace wrt::bench
