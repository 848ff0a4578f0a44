#include "wrt/bench.hpp"

#include "wrt/baseline.hpp"
#include "wrt/error.hpp"
#include "wrt/fft.hpp"
#include "wrt/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

namespace wrt::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Job {
    std::size_t length;
    double snr_db;
    int trial;
};

struct JobOutput {
    std::vector<TrialRecord> records;
    TrialTiming timing{};
    bool failed = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

JobOutput run_job(const BenchSpec& spec, const Kernel& k_true, const Job& job) {
    JobOutput out;
    out.timing = {job.length, job.snr_db, job.trial, 0.0, 0.0};
    const std::uint64_t seed = trial_seed(spec.seed, job.length, job.snr_db, job.trial);

    auto base = [&](std::string method) {
        TrialRecord r;
        r.length = job.length;
        r.snr_db = job.snr_db;
        r.trial = job.trial;
        r.seed = seed;
        r.method = std::move(method);
        return r;
    };
    auto fail_all = [&](const std::string& what) {
        for (select::Strategy s : select::kAllStrategies) {
            auto r = base(std::string(select::strategy_name(s)));
            r.ok = false;
            r.error = what;
            r.lambda = r.k_snr_db = r.y_rec_snr_db = r.corr_coeff = r.c_est = kNaN;
            out.records.push_back(std::move(r));
        }
        out.failed = true;
    };

    std::optional<synth::Scenario> sc;
    try {
        const auto x = rainfall(spec.rain, job.length, seed);
        sc = synth::synthesize_observation(x, k_true, spec.c_true, job.snr_db, seed);
    } catch (const std::exception& e) {
        fail_all(std::string("scenario: ") + e.what());
    }

    if (sc) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Deconvolver solver(sc->x, k_true.size());
            const auto report = select::sweep(solver, sc->y_noisy, spec.grid, spec.solver, &k_true);
            for (select::Strategy s : select::kAllStrategies) {
                auto r = base(std::string(select::strategy_name(s)));
                try {
                    const auto sel = select::select_lambda(report, s, sc->noise_variance);
                    const auto& e = report.entries[sel.index];
                    r.lambda = sel.chosen_lambda;
                    r.k_snr_db = *e.k_snr_db;
                    r.y_rec_snr_db = e.y_rec_snr_db;
                    r.corr_coeff = e.y_corr_coeff;
                    r.c_est = sel.chosen_result.c_est;
                    r.converged = sel.chosen_result.converged;
                    r.iterations = sel.chosen_result.outer_iterations;
                    r.feasible = sel.chosen_result.iterates_feasible;
                } catch (const std::exception& e) {
                    r.ok = false;
                    r.error = e.what();
                    r.lambda = r.k_snr_db = r.y_rec_snr_db = r.corr_coeff = r.c_est = kNaN;
                    out.failed = true;
                }
                out.records.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            fail_all(std::string("sweep: ") + e.what());
        }
        out.timing.sweep_seconds = seconds_since(t0);
    }

    if (spec.include_xcorr) {
        auto r = base("xcorr");
        r.lambda = kNaN;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (!sc) throw NumericalFailure("no scenario");
            const auto est = baseline::xcorr_estimate(sc->x, sc->y_noisy,
                                                      baseline::XcorrConfig{k_true.size()});
            r.k_snr_db = select::snr_db(k_true.values(), est.k_est.values());
            r.y_rec_snr_db = select::snr_db(sc->y_noisy.values(), est.y_rec.values());
            try {
                r.corr_coeff = select::corr_coeff(sc->y_noisy.values(), est.y_rec.values());
            } catch (const InvalidArgument&) {
                r.corr_coeff = kNaN;
            }
            r.c_est = est.c_est;
            r.converged = true;
            r.feasible = est.iterates_feasible;
        } catch (const std::exception& e) {
            r.ok = false;
            r.error = e.what();
            r.k_snr_db = r.y_rec_snr_db = r.corr_coeff = r.c_est = kNaN;
            out.failed = true;
        }
        out.timing.xcorr_seconds = seconds_since(t0);
        out.records.push_back(std::move(r));
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return kNaN;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int method_rank(const std::string& m) {
    for (std::size_t i = 0; i < std::size(select::kAllStrategies); ++i)
        if (m == select::strategy_name(select::kAllStrategies[i])) return static_cast<int>(i);
    return static_cast<int>(std::size(select::kAllStrategies));
}

using GroupKey = std::tuple<std::size_t, double, int>;

template <class F>
std::map<GroupKey, std::pair<std::string, std::vector<double>>> group(const BenchResult& result, F value) {
    std::map<GroupKey, std::pair<std::string, std::vector<double>>> g;
    for (const auto& r : result.records) {
        if (!r.ok) continue;
        const double v = value(r);
        if (std::isnan(v)) continue;
        auto& slot = g[{r.length, r.snr_db, method_rank(r.method)}];
        slot.first = r.method;
        slot.second.push_back(v);
    }
    return g;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return io::format_double(v);
}

} // namespace

void BenchSpec::validate() const {
    if (snr_levels_db.empty()) throw InvalidArgument("bench: at least one SNR level is required");
    for (double s : snr_levels_db)
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
            throw InvalidArgument("bench: SNR levels must be finite or +inf");
    if (trials < 1) throw InvalidArgument("bench: trials must be >= 1");
    if (lengths.empty()) throw InvalidArgument("bench: at least one series length is required");
    for (auto T : lengths)
        if (T < 1) throw InvalidArgument("bench: series lengths must be >= 1");
    if (!std::isfinite(c_true)) throw InvalidArgument("bench: c must be finite");
    rain.validate();
    kernel_spec().validate();
    solver.validate();
}

synth::KernelSpec BenchSpec::kernel_spec() const {
    return synth::KernelSpec{beta_a, beta_b, kernel_support, amplitude};
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t length, double snr_db, int trial) {
    // SNR levels enter through their value in millidecibels.
    const auto level = static_cast<std::uint64_t>(std::isinf(snr_db) ? std::numeric_limits<std::int64_t>::max()
                                                                     : std::llround(snr_db * 1000.0));
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ static_cast<std::uint64_t>(length));
    h = splitmix64(h ^ level);
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return h;
}

TimeSeries rainfall(const synth::MultifractalParams& params, std::size_t T, std::uint64_t seed) {
    if (T < 1) throw InvalidArgument("rainfall: length must be >= 1");
    const std::size_t n = fft::next_pow2(std::max<std::size_t>(T, 64));
    const auto full = synth::simulate_rainfall(params, n, seed);
    if (n == T) return full;
    return TimeSeries(std::vector<double>(full.values().begin(), full.values().begin() + static_cast<long>(T)));
}

BenchResult run_bench(const BenchSpec& spec, const Progress& progress) {
    spec.validate();
    const Kernel k_true = synth::make_beta_kernel(spec.kernel_spec());

    std::vector<Job> jobs;
    for (auto T : spec.lengths)
        for (double s : spec.snr_levels_db)
            for (int t = 0; t < spec.trials; ++t) jobs.push_back({T, s, t});

    std::vector<JobOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            outputs[i] = run_job(spec, k_true, jobs[i]);
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(d, jobs.size());
            }
        }
    };

    unsigned n_threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, jobs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BenchResult result;
    result.trials_total = jobs.size();
    for (auto& o : outputs) {
        for (auto& r : o.records) result.records.push_back(std::move(r));
        result.timings.push_back(o.timing);
        if (o.failed) ++result.trials_failed;
    }
    return result;
}

std::vector<AggregateRow> aggregate_k_snr(const BenchResult& result) {
    std::vector<AggregateRow> rows;
    for (auto& [key, slot] : group(result, [](const TrialRecord& r) { return r.k_snr_db; })) {
        const double m = mean_of(slot.second);
        rows.push_back({std::get<0>(key), std::get<1>(key), slot.first, slot.second.size(), m,
                        sample_std(slot.second, m)});
    }
    return rows;
}

std::vector<LambdaRow> aggregate_lambda(const BenchResult& result) {
    std::vector<LambdaRow> rows;
    for (auto& [key, slot] : group(result, [](const TrialRecord& r) { return r.lambda; })) {
        std::vector<double> logs;
        for (double l : slot.second) logs.push_back(std::log10(l));
        rows.push_back({std::get<0>(key), std::get<1>(key), slot.first, slot.second.size(),
                        mean_of(slot.second), mean_of(logs)});
    }
    return rows;
}

void write_outputs(const std::filesystem::path& dir, const BenchResult& result) {
    std::filesystem::create_directories(dir);

    std::string trials =
        "length,snr_db,trial,seed,method,lambda,k_snr_db,y_rec_snr_db,corr_coeff,c_est,converged,"
        "iterations,feasible,ok,error\n";
    for (const auto& r : result.records) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        trials += std::to_string(r.length) + ',' + fmt(r.snr_db) + ',' + std::to_string(r.trial) + ',' +
                  std::to_string(r.seed) + ',' + r.method + ',' + fmt(r.lambda) + ',' + fmt(r.k_snr_db) +
                  ',' + fmt(r.y_rec_snr_db) + ',' + fmt(r.corr_coeff) + ',' + fmt(r.c_est) + ',' +
                  (r.converged ? "1" : "0") + ',' + std::to_string(r.iterations) + ',' +
                  (r.feasible ? "1" : "0") + ',' + (r.ok ? "1" : "0") + ',' + err + '\n';
    }
    io::write_text_file(dir / "trials.csv", trials);

    const auto agg = aggregate_k_snr(result);
    std::string level = "length,snr_db,method,n,mean_k_snr_db,std_k_snr_db\n";
    for (const auto& a : agg)
        level += std::to_string(a.length) + ',' + fmt(a.snr_db) + ',' + a.method + ',' + std::to_string(a.n) +
                 ',' + fmt(a.mean) + ',' + fmt(a.stddev) + '\n';
    io::write_text_file(dir / "k_snr_vs_level.csv", level);

    std::string lam = "length,snr_db,method,n,mean_lambda,mean_log10_lambda\n";
    for (const auto& l : aggregate_lambda(result))
        lam += std::to_string(l.length) + ',' + fmt(l.snr_db) + ',' + l.method + ',' + std::to_string(l.n) +
               ',' + fmt(l.mean_lambda) + ',' + fmt(l.mean_log10_lambda) + '\n';
    io::write_text_file(dir / "lambda_vs_level.csv", lam);

    // Same statistics regrouped so each (method, level) lists every length.
    auto by_length = agg;
    std::stable_sort(by_length.begin(), by_length.end(), [](const AggregateRow& a, const AggregateRow& b) {
        return std::make_tuple(method_rank(a.method), a.snr_db, a.length) <
               std::make_tuple(method_rank(b.method), b.snr_db, b.length);
    });
    std::string len = "method,snr_db,length,n,mean_k_snr_db,std_k_snr_db\n";
    for (const auto& a : by_length)
        len += a.method + ',' + fmt(a.snr_db) + ',' + std::to_string(a.length) + ',' + std::to_string(a.n) +
               ',' + fmt(a.mean) + ',' + fmt(a.stddev) + '\n';
    io::write_text_file(dir / "k_snr_vs_length.csv", len);

    std::string timing = "length,snr_db,trial,sweep_seconds,xcorr_seconds\n";
    for (const auto& t : result.timings)
        timing += std::to_string(t.length) + ',' + fmt(t.snr_db) + ',' + std::to_string(t.trial) + ',' +
                  fmt(t.sweep_seconds) + ',' + fmt(t.xcorr_seconds) + '\n';
    io::write_text_file(dir / "timing.csv", timing);
}

} // namespace wrt::bench
