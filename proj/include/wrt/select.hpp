#pragma once
// Metrics, lambda sweeps and the four automatic lambda-selection strategies.

#include "wrt/solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wrt::select {

// 20 log10(||m||^2 / ||m - m_est||^2); +inf when m_est == m.
double snr_db(std::span<const double> m, std::span<const double> m_est);
double corr_coeff(std::span<const double> a, std::span<const double> b);
// Population variance.
double variance(std::span<const double> v);
// First moment of the nonnegative-lag part of a causal nonnegative kernel.
double mean_residence_time(const Kernel& k_est);

class LambdaGrid {
public:
    explicit LambdaGrid(std::vector<double> values);

    // `count` values evenly spaced in log10 between lo and hi, inclusive.
    static LambdaGrid log_spaced(double lo, double hi, std::size_t count);
    // 20 values from 1e-5 to 1e12.
    static LambdaGrid synthetic_default();
    // 20 values from 1e2 to 1e8.
    static LambdaGrid real_data_default();

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool contains(double lambda) const noexcept;

private:
    std::vector<double> values_;
};

struct SweepEntry {
    double lambda = 0.0;
    std::optional<DeconvResult> result;  // empty when the solve failed
    std::string error;
    double y_rec_snr_db = 0.0;
    double y_corr_coeff = 0.0;
    std::optional<double> k_snr_db;
    double residual_variance = 0.0;
    double runtime_seconds = 0.0;

    bool ok() const noexcept { return result.has_value(); }
};

struct SweepReport {
    std::vector<SweepEntry> entries;  // grid order
};

SweepReport sweep(const Deconvolver& solver, const TimeSeries& y, const LambdaGrid& grid,
                  const SolverConfig& base_config, const Kernel* ground_truth = nullptr);

SweepReport sweep(const TimeSeries& x, const TimeSeries& y, std::size_t K, const LambdaGrid& grid,
                  const SolverConfig& base_config, const Kernel* ground_truth = nullptr);

enum class Strategy { oracle, discrepancy, fidelity, corr_coeff };

std::string_view strategy_name(Strategy s) noexcept;
// Accepts "oracle", "discrepancy", "fidelity", "corr" / "corrCoeff".
Strategy parse_strategy(std::string_view name);
inline constexpr Strategy kAllStrategies[] = {Strategy::oracle, Strategy::discrepancy,
                                              Strategy::fidelity, Strategy::corr_coeff};

struct StrategySelection {
    Strategy strategy;
    double chosen_lambda;
    std::size_t index;  // into the report
    DeconvResult chosen_result;
    double criterion_value;
};

StrategySelection select_lambda(const SweepReport& report, Strategy strategy,
                                std::optional<double> noise_variance = std::nullopt);

} // namespace wrt::select
