#include "wrt/select.hpp"

#include "wrt/error.hpp"
#include "wrt/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace wrt::select {

double snr_db(std::span<const double> m, std::span<const double> m_est) {
    if (m.size() != m_est.size()) throw InvalidArgument("snr_db: length mismatch");
    const double signal = simd::squared_norm(m);
    if (!(signal > 0.0)) throw InvalidArgument("snr_db: reference signal has zero norm");
    const double err = simd::squared_distance(m, m_est);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(signal / err);
}

double corr_coeff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("corr_coeff: length mismatch");
    if (a.size() < 2) throw InvalidArgument("corr_coeff: need at least two samples");
    const double n = static_cast<double>(a.size());
    const double ma = simd::sum(a) / n, mb = simd::sum(b) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) throw InvalidArgument("corr_coeff: zero-variance input");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double variance(std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("variance: empty input");
    const double m = simd::sum(v) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double a : v) acc += (a - m) * (a - m);
    return acc / static_cast<double>(v.size());
}

double mean_residence_time(const Kernel& k_est) {
    const auto pos = k_est.nonnegative_lags();
    double mass = 0.0, moment = 0.0;
    for (std::size_t t = 0; t < pos.size(); ++t) {
        mass += pos[t];
        moment += pos[t] * static_cast<double>(t);
    }
    if (!(mass > 0.0)) throw InvalidArgument("mean_residence_time: kernel has zero mass on nonnegative lags");
    return moment / mass;
}

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("lambda grid: empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
            throw InvalidArgument("lambda grid: values must be finite and > 0");
        if (i > 0 && !(values_[i] > values_[i - 1]))
            throw InvalidArgument("lambda grid: values must be strictly increasing");
    }
}

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, std::size_t count) {
    if (count == 0) throw InvalidArgument("lambda grid: count must be >= 1");
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("lambda grid: need 0 < min <= max");
    if (count == 1) return LambdaGrid({lo});
    if (hi == lo) throw InvalidArgument("lambda grid: min == max requires count == 1");
    const double a = std::log10(lo), b = std::log10(hi);
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    v.front() = lo;
    v.back() = hi;
    return LambdaGrid(std::move(v));
}

LambdaGrid LambdaGrid::synthetic_default() { return log_spaced(1e-5, 1e12, 20); }
LambdaGrid LambdaGrid::real_data_default() { return log_spaced(1e2, 1e8, 20); }

bool LambdaGrid::contains(double lambda) const noexcept {
    return std::find(values_.begin(), values_.end(), lambda) != values_.end();
}

SweepReport sweep(const Deconvolver& solver, const TimeSeries& y, const LambdaGrid& grid,
                  const SolverConfig& base_config, const Kernel* ground_truth) {
    if (ground_truth != nullptr && ground_truth->size() != solver.kernel_length())
        throw InvalidArgument("sweep: ground-truth kernel length differs from K");
    SweepReport report;
    report.entries.reserve(grid.size());
    for (double lambda : grid.values()) {
        SweepEntry e;
        e.lambda = lambda;
        SolverConfig cfg = base_config;
        cfg.lambda = lambda;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.result = solver.run(y, cfg);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        e.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.result) {
            const auto& r = *e.result;
            e.y_rec_snr_db = snr_db(y.values(), r.y_rec.values());
            try {
                e.y_corr_coeff = corr_coeff(y.values(), r.y_rec.values());
            } catch (const InvalidArgument&) {
                e.y_corr_coeff = std::numeric_limits<double>::quiet_NaN();
            }
            std::vector<double> res(y.size());
            simd::residual(y.values(), r.y_rec.values(), 0.0, res);
            e.residual_variance = variance(res);
            if (ground_truth != nullptr) e.k_snr_db = snr_db(ground_truth->values(), r.k_est.values());
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

SweepReport sweep(const TimeSeries& x, const TimeSeries& y, std::size_t K, const LambdaGrid& grid,
                  const SolverConfig& base_config, const Kernel* ground_truth) {
    const Deconvolver solver(x, K);
    return sweep(solver, y, grid, base_config, ground_truth);
}

std::string_view strategy_name(Strategy s) noexcept {
    switch (s) {
    case Strategy::oracle: return "oracle";
    case Strategy::discrepancy: return "discrepancy";
    case Strategy::fidelity: return "fidelity";
    case Strategy::corr_coeff: return "corrCoeff";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "oracle") return Strategy::oracle;
    if (name == "discrepancy") return Strategy::discrepancy;
    if (name == "fidelity") return Strategy::fidelity;
    if (name == "corr" || name == "corrCoeff" || name == "corr_coeff") return Strategy::corr_coeff;
    throw InvalidArgument("unknown strategy '" + std::string(name) +
                          "' (expected oracle|discrepancy|fidelity|corr)");
}

StrategySelection select_lambda(const SweepReport& report, Strategy strategy,
                                std::optional<double> noise_variance) {
    if (report.entries.empty()) throw InvalidArgument("select_lambda: empty sweep report");
    if (strategy == Strategy::discrepancy && !noise_variance)
        throw InvalidArgument("select_lambda: strategy 'discrepancy' requires the noise variance");
    if (strategy == Strategy::oracle) {
        const bool has_truth = std::any_of(report.entries.begin(), report.entries.end(),
                                           [](const SweepEntry& e) { return e.k_snr_db.has_value(); });
        if (!has_truth)
            throw InvalidArgument("select_lambda: strategy 'oracle' requires a ground-truth kernel");
    }

    // Score to maximize; ties go to the later (larger) lambda.
    auto score = [&](const SweepEntry& e) -> double {
        switch (strategy) {
        case Strategy::oracle: return e.k_snr_db.value_or(std::numeric_limits<double>::quiet_NaN());
        case Strategy::fidelity: return e.y_rec_snr_db;
        case Strategy::corr_coeff: return e.y_corr_coeff;
        case Strategy::discrepancy: return -std::abs(e.residual_variance - *noise_variance);
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        if (!e.ok()) continue;
        const double v = score(e);
        if (std::isnan(v)) continue;
        if (!best || v >= best_score) {
            best = i;
            best_score = v;
        }
    }
    if (!best)
        throw InvalidArgument("select_lambda: no successful sweep entry is usable for strategy '" +
                              std::string(strategy_name(strategy)) + "'");
    const auto& e = report.entries[*best];
    const double criterion = strategy == Strategy::discrepancy ? -best_score : best_score;
    return StrategySelection{strategy, e.lambda, *best, *e.result, criterion};
}

} // namespace wrt::select
