#include "wrt/cli.hpp"

#include "wrt/baseline.hpp"
#include "wrt/bench.hpp"
#include "wrt/error.hpp"
#include "wrt/io.hpp"
#include "wrt/select.hpp"
#include "wrt/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef WRT_VERSION
#define WRT_VERSION "0.0.0"
#endif

namespace wrt::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Bad arguments or unusable inputs.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Outputs were written but part of the requested work failed.
struct PartialFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double parse_snr(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "Inf" || s == "infinity") return synth::kNoiseFree;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("bad SNR '" + s + "' (number of dB or 'inf')");
    }
    if (used != s.size() || std::isnan(v)) throw UsageError("bad SNR '" + s + "' (number of dB or 'inf')");
    return v;
}

select::LambdaGrid parse_grid(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--grid expects min,max,count");
    try {
        std::size_t a = 0, b = 0, c = 0;
        const double lo = std::stod(parts[0], &a);
        const double hi = std::stod(parts[1], &b);
        const long n = std::stol(parts[2], &c);
        if (a != parts[0].size() || b != parts[1].size() || c != parts[2].size() || n < 1)
            throw UsageError("--grid expects min,max,count");
        return select::LambdaGrid::log_spaced(lo, hi, static_cast<std::size_t>(n));
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    } catch (const std::logic_error&) {
        throw UsageError("--grid expects min,max,count");
    }
}

fs::path output_root() {
    if (const char* env = std::getenv("WRT_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
    return "wrt-output";
}

// SOURCE_DATE_EPOCH pins the timestamp for reproducible manifests.
std::string timestamp_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0')
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_json(const fs::path& path, const Json& j) { io::write_text_file(path, j.dump(2) + "\n"); }

std::string to_option_value(const Json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw UsageError("config key '" + key + "' has an unsupported value");
}

// Options absent from the command line are filled from the file. A manifest
// is accepted too: its "config" object is used.
void apply_config(CLI::App* sub, const fs::path& file) {
    Json j;
    try {
        j = Json::parse(io::read_text_file(file));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(file.string() + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError(file.string() + ": expected a JSON object");
    if (j.contains("command") && j["command"] != sub->get_name())
        throw UsageError(file.string() + ": written for command '" + j["command"].dump() + "'");
    const Json& cfg = (j.contains("config") && j["config"].is_object()) ? j["config"] : j;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command" || key == "config") continue;
        std::string name = key;
        for (char& ch : name)
            if (ch == '_') ch = '-';
        CLI::Option* opt = sub->get_option_no_throw("--" + name);
        if (opt == nullptr) throw UsageError(file.string() + ": unknown option '" + key + "'");
        if (opt->count() > 0) continue;
        if (value.is_array()) {
            for (const auto& v : value) opt->add_result(to_option_value(v, key));
        } else {
            opt->add_result(to_option_value(value, key));
        }
        opt->run_callback();
    }
}

Json given_options(const CLI::App* sub) {
    Json cfg = Json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || names[0] == "help" || names[0] == "config" || opt->count() == 0) continue;
        const auto& r = opt->results();
        if (r.size() == 1) {
            cfg[names[0]] = r[0];
        } else {
            cfg[names[0]] = r;
        }
    }
    return cfg;
}

struct Run {
    std::string command;
    fs::path out;
    Json config;
    Json inputs = Json::object();
    std::optional<std::uint64_t> seed;

    void prepare() {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec || !fs::is_directory(out)) throw IoError(out.string(), "cannot create output directory");
        Json m;
        m["command"] = command;
        m["inputs"] = inputs;
        m["out"] = out.string();
        m["seed"] = seed ? Json(*seed) : Json(nullptr);
        m["config"] = config;
        m["version"] = version();
        m["timestamp"] = timestamp_utc();
        write_json(out / "manifest.json", m);
    }
};

struct SolverFlags {
    double alpha_min = SolverConfig{}.alpha_min;
    double k_err_min = SolverConfig{}.k_err_min;
    double y_err_min = SolverConfig{}.y_err_min;
    int s_max = SolverConfig{}.s_max;
    int t_max = SolverConfig{}.t_max;

    void add_to(CLI::App* app) {
        app->add_option("--alpha-min", alpha_min, "Smallest backtracking step");
        app->add_option("--k-err-min", k_err_min, "Relative kernel change tolerance");
        app->add_option("--y-err-min", y_err_min, "Relative reconstruction change tolerance");
        app->add_option("--s-max", s_max, "Outer iteration cap");
        app->add_option("--t-max", t_max, "Backtracking steps per outer iteration");
    }
    SolverConfig config(double lambda = 1.0) const {
        SolverConfig c;
        c.lambda = lambda;
        c.alpha_min = alpha_min;
        c.k_err_min = k_err_min;
        c.y_err_min = y_err_min;
        c.s_max = s_max;
        c.t_max = t_max;
        return c;
    }
};

struct Options {
    std::string config_file;
    std::string out;
    std::string input_x, input_y, k_true;
    std::size_t kernel_length = 1000;
    std::optional<double> lambda;
    std::string strategy;
    std::string grid;
    std::optional<double> noise_variance;
    std::string snr_db = "25";
    std::uint64_t seed = 1;

    std::size_t length = 1024;
    double c = 100.0;
    double H = synth::MultifractalParams{}.H;
    double C1 = synth::MultifractalParams{}.C1;
    double alpha = synth::MultifractalParams{}.alpha_levy;
    double beta_a = 2.0, beta_b = 6.0;
    std::optional<double> amplitude;

    int trials = 30;
    std::vector<std::size_t> lengths{1000, 5000};
    std::vector<std::string> snr_levels{"0", "5", "10", "15", "20", "25", "30"};
    std::size_t support = 500;
    unsigned threads = 1;
    bool no_xcorr = false;
    bool unbiased = false;

    std::string manifest;
    SolverFlags solver;
};

TimeSeries load_series(const std::string& path, const char* flag) {
    if (path.empty()) throw UsageError(std::string(flag) + " is required");
    return io::read_series_csv(path);
}

Json fit_summary(const TimeSeries& y, const DeconvResult& r, const Kernel* k_true) {
    Json s;
    s["c_est"] = num(r.c_est);
    s["y_rec_snr_db"] = num(select::snr_db(y.values(), r.y_rec.values()));
    double cc = std::numeric_limits<double>::quiet_NaN();
    try {
        cc = select::corr_coeff(y.values(), r.y_rec.values());
    } catch (const InvalidArgument&) {
    }
    s["corr_coeff"] = num(cc);
    double tau = std::numeric_limits<double>::quiet_NaN();
    try {
        tau = select::mean_residence_time(r.k_est);
    } catch (const InvalidArgument&) {
    }
    s["tau"] = num(tau);
    if (k_true != nullptr) s["k_snr_db"] = num(select::snr_db(k_true->values(), r.k_est.values()));
    return s;
}

std::optional<Kernel> load_truth(const Options& o, std::size_t K, Run& run) {
    if (o.k_true.empty()) return std::nullopt;
    auto k = io::read_kernel_csv(o.k_true);
    if (k.size() != K)
        throw UsageError("--k-true has " + std::to_string(k.size()) + " entries, kernel length is " +
                         std::to_string(K));
    run.inputs["k_true"] = o.k_true;
    return k;
}

std::string sweep_csv(const select::SweepReport& report) {
    std::string s = "lambda,ok,k_snr_db,y_rec_snr_db,corr_coeff,residual_variance,c_est,converged,iterations,"
                    "termination,runtime_seconds\n";
    auto f = [](double v) {
        if (std::isnan(v)) return std::string("nan");
        if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
        return io::format_double(v);
    };
    for (const auto& e : report.entries) {
        s += f(e.lambda) + ',' + (e.ok() ? "1" : "0") + ',';
        if (!e.ok()) {
            s += "nan,nan,nan,nan,nan,0,0,error," + f(e.runtime_seconds) + '\n';
            continue;
        }
        s += (e.k_snr_db ? f(*e.k_snr_db) : "nan") + ',' + f(e.y_rec_snr_db) + ',' + f(e.y_corr_coeff) + ',' +
             f(e.residual_variance) + ',' + f(e.result->c_est) + ',' + (e.result->converged ? "1" : "0") + ',' +
             std::to_string(e.result->outer_iterations) + ',' +
             std::string(termination_name(e.result->termination)) + ',' + f(e.runtime_seconds) + '\n';
    }
    return s;
}

int cmd_simulate(const Options& o, Run& run) {
    if (o.kernel_length < 2 || o.kernel_length % 2 != 0)
        throw UsageError("--kernel-length must be even and >= 2");
    const double snr = parse_snr(o.snr_db);
    synth::MultifractalParams params{o.H, o.C1, o.alpha};
    synth::KernelSpec kspec{o.beta_a, o.beta_b, o.kernel_length / 2, o.amplitude.value_or(1.0)};
    params.validate();
    kspec.validate();
    run.seed = o.seed;
    run.prepare();

    const auto x = bench::rainfall(params, o.length, o.seed);
    const auto k = synth::make_beta_kernel(kspec);
    const auto sc = synth::synthesize_observation(x, k, o.c, snr, o.seed);

    io::write_series_csv(run.out / "x.csv", sc.x);
    io::write_series_csv(run.out / "y.csv", sc.y_noisy);
    io::write_kernel_csv(run.out / "k_true.csv", sc.k_true);
    Json j;
    j["length"] = o.length;
    j["kernel_length"] = o.kernel_length;
    j["c_true"] = num(sc.c_true);
    j["noise_variance"] = num(sc.noise_variance);
    j["input_snr_db"] = num(sc.input_snr_db);
    j["seed"] = sc.seed;
    j["params"] = {{"H", params.H}, {"C1", params.C1}, {"alpha_levy", params.alpha_levy}};
    j["kernel"] = {{"beta_a", kspec.beta_a},
                   {"beta_b", kspec.beta_b},
                   {"support_length", kspec.support_length},
                   {"amplitude", kspec.amplitude}};
    j["tau_true"] = num(select::mean_residence_time(k));
    write_json(run.out / "scenario.json", j);
    std::cout << "simulate: wrote " << run.out.string() << "\n";
    return kOk;
}

int cmd_estimate(const Options& o, Run& run) {
    if (o.lambda && !o.strategy.empty()) throw UsageError("--lambda and --strategy are mutually exclusive");
    const auto x = load_series(o.input_x, "--input-x");
    const auto y = load_series(o.input_y, "--input-y");
    if (x.size() != y.size()) throw UsageError("--input-x and --input-y have different lengths");
    run.inputs["x"] = o.input_x;
    run.inputs["y"] = o.input_y;
    const std::size_t K = o.kernel_length;
    const auto truth = load_truth(o, K, run);

    std::optional<select::Strategy> strategy;
    if (!o.lambda) {
        try {
            strategy = select::parse_strategy(o.strategy.empty() ? "corrCoeff" : o.strategy);
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        if (*strategy == select::Strategy::oracle && !truth)
            throw UsageError("strategy 'oracle' requires --k-true");
        if (*strategy == select::Strategy::discrepancy && !o.noise_variance)
            throw UsageError("strategy 'discrepancy' requires --noise-variance");
    }
    const auto grid = o.grid.empty() ? select::LambdaGrid::synthetic_default() : parse_grid(o.grid);
    const SolverConfig base = o.solver.config(o.lambda.value_or(1.0));
    try {
        base.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    run.prepare();

    const auto t0 = std::chrono::steady_clock::now();
    const Deconvolver solver(x, K);
    std::optional<DeconvResult> fit;
    double chosen = 0.0;
    if (o.lambda) {
        fit = solver.run(y, base);
        chosen = *o.lambda;
    } else {
        const auto report = select::sweep(solver, y, grid, base, truth ? &*truth : nullptr);
        io::write_text_file(run.out / "sweep.csv", sweep_csv(report));
        auto sel = select::select_lambda(report, *strategy, o.noise_variance);
        fit = std::move(sel.chosen_result);
        chosen = sel.chosen_lambda;
    }
    const DeconvResult& result = *fit;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::write_kernel_csv(run.out / "k_est.csv", result.k_est);
    io::write_series_csv(run.out / "y_rec.csv", result.y_rec);
    Json s = fit_summary(y, result, truth ? &*truth : nullptr);
    Json summary;
    summary["c_est"] = s["c_est"];
    summary["chosen_lambda"] = num(chosen);
    summary["strategy"] = strategy ? std::string(select::strategy_name(*strategy)) : std::string("fixed");
    summary["y_rec_snr_db"] = s["y_rec_snr_db"];
    summary["corr_coeff"] = s["corr_coeff"];
    summary["tau"] = s["tau"];
    summary["converged"] = result.converged;
    summary["iterations"] = result.outer_iterations;
    summary["termination"] = std::string(termination_name(result.termination));
    summary["runtime_seconds"] = elapsed;
    if (truth) summary["k_snr_db"] = s["k_snr_db"];
    summary["warnings"] = result.warnings;
    write_json(run.out / "summary.json", summary);
    std::cout << "estimate: lambda " << io::format_double(chosen) << ", c_est " << io::format_double(result.c_est)
              << ", wrote " << run.out.string() << "\n";
    return kOk;
}

int cmd_xcorr(const Options& o, Run& run) {
    const auto x = load_series(o.input_x, "--input-x");
    const auto y = load_series(o.input_y, "--input-y");
    if (x.size() != y.size()) throw UsageError("--input-x and --input-y have different lengths");
    if (o.kernel_length < 2 || o.kernel_length % 2 != 0)
        throw UsageError("--kernel-length must be even and >= 2");
    run.inputs["x"] = o.input_x;
    run.inputs["y"] = o.input_y;
    const auto truth = load_truth(o, o.kernel_length, run);
    run.prepare();

    baseline::XcorrConfig cfg{o.kernel_length, true,
                              o.unbiased ? baseline::Normalization::unbiased : baseline::Normalization::biased};
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = baseline::xcorr_estimate(x, y, cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::write_kernel_csv(run.out / "k_est.csv", result.k_est);
    io::write_series_csv(run.out / "y_rec.csv", result.y_rec);
    Json summary = fit_summary(y, result, truth ? &*truth : nullptr);
    summary["runtime_seconds"] = elapsed;
    write_json(run.out / "summary.json", summary);
    std::cout << "xcorr: wrote " << run.out.string() << "\n";
    return kOk;
}

int cmd_sweep(const Options& o, Run& run) {
    const auto x = load_series(o.input_x, "--input-x");
    const auto y = load_series(o.input_y, "--input-y");
    if (x.size() != y.size()) throw UsageError("--input-x and --input-y have different lengths");
    run.inputs["x"] = o.input_x;
    run.inputs["y"] = o.input_y;
    const auto truth = load_truth(o, o.kernel_length, run);
    const auto grid = o.grid.empty() ? select::LambdaGrid::synthetic_default() : parse_grid(o.grid);
    const SolverConfig base = o.solver.config();
    run.prepare();

    const Deconvolver solver(x, o.kernel_length);
    const auto report = select::sweep(solver, y, grid, base, truth ? &*truth : nullptr);
    io::write_text_file(run.out / "sweep.csv", sweep_csv(report));

    Json sel = Json::object();
    for (select::Strategy s : select::kAllStrategies) {
        if (s == select::Strategy::oracle && !truth) continue;
        if (s == select::Strategy::discrepancy && !o.noise_variance) continue;
        const std::string name(select::strategy_name(s));
        try {
            const auto pick = select::select_lambda(report, s, o.noise_variance);
            sel[name] = {{"chosen_lambda", num(pick.chosen_lambda)},
                         {"index", pick.index},
                         {"criterion_value", num(pick.criterion_value)}};
        } catch (const InvalidArgument& e) {
            sel[name] = {{"error", e.what()}};
        }
    }
    write_json(run.out / "selections.json", sel);

    std::size_t failed = 0;
    for (const auto& e : report.entries) failed += e.ok() ? 0 : 1;
    std::cout << "sweep: " << report.entries.size() - failed << "/" << report.entries.size()
              << " solves succeeded, wrote " << run.out.string() << "\n";
    if (failed > 0) throw PartialFailure(std::to_string(failed) + " sweep entries failed");
    return kOk;
}

int cmd_bench(const Options& o, Run& run) {
    bench::BenchSpec spec;
    spec.snr_levels_db.clear();
    for (const auto& s : o.snr_levels) spec.snr_levels_db.push_back(parse_snr(s));
    spec.trials = o.trials;
    spec.lengths = o.lengths;
    spec.kernel_support = o.support;
    if (!o.grid.empty()) spec.grid = parse_grid(o.grid);
    spec.rain = {o.H, o.C1, o.alpha};
    spec.beta_a = o.beta_a;
    spec.beta_b = o.beta_b;
    if (o.amplitude) spec.amplitude = *o.amplitude;
    spec.c_true = o.c;
    spec.seed = o.seed;
    spec.solver = o.solver.config();
    spec.include_xcorr = !o.no_xcorr;
    spec.threads = o.threads;
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    run.seed = o.seed;
    run.prepare();

    const auto result = bench::run_bench(spec);
    bench::write_outputs(run.out, result);
    Json summary;
    summary["trials_total"] = result.trials_total;
    summary["trials_failed"] = result.trials_failed;
    summary["failure_fraction"] = result.failure_fraction();
    summary["amplitude"] = spec.amplitude;
    summary["kernel_length"] = 2 * spec.kernel_support;
    write_json(run.out / "summary.json", summary);
    std::cout << "bench: " << result.trials_total - result.trials_failed << "/" << result.trials_total
              << " trials succeeded, wrote " << run.out.string() << "\n";
    if (result.failure_fraction() > 0.10)
        throw PartialFailure("more than 10% of bench trials failed");
    return kOk;
}

int dispatch(const std::vector<std::string>& args, int depth);

int cmd_replay(const Options& o, int depth) {
    if (depth > 0) throw UsageError("a replay manifest cannot itself replay");
    Json m;
    try {
        m = Json::parse(io::read_text_file(o.manifest));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(o.manifest + ": " + e.what());
    }
    if (!m.is_object() || !m.contains("command") || !m["command"].is_string())
        throw UsageError(o.manifest + ": not a manifest");
    std::vector<std::string> args{m["command"].get<std::string>()};
    if (m.contains("config") && m["config"].is_object()) {
        for (const auto& [key, value] : m["config"].items()) {
            if (key == "out" && !o.out.empty()) continue;
            std::string joined;
            if (value.is_array()) {
                for (const auto& v : value) joined += (joined.empty() ? "" : ",") + to_option_value(v, key);
            } else {
                joined = to_option_value(value, key);
            }
            args.push_back("--" + key + "=" + joined);
        }
    }
    if (!o.out.empty()) {
        args.push_back("--out=" + o.out);
    } else if (!m["config"].contains("out") && m.contains("out") && m["out"].is_string()) {
        args.push_back("--out=" + m["out"].get<std::string>());
    }
    return dispatch(args, depth + 1);
}

void add_io(CLI::App* c, Options& o) {
    c->add_option("--input-x", o.input_x, "Rainfall CSV (t,value)");
    c->add_option("--input-y", o.input_y, "Observed output CSV (t,value)");
    c->add_option("--kernel-length", o.kernel_length, "Kernel length K (lags -K/2 ... K/2-1)");
    c->add_option("--k-true", o.k_true, "Ground-truth kernel CSV (lag,value)");
}

void add_common(CLI::App* c, Options& o) {
    c->add_option("--out", o.out, "Output directory");
    c->add_option("--config", o.config_file, "JSON file of option values; flags take precedence");
}

void add_rain(CLI::App* c, Options& o) {
    c->add_option("--H", o.H, "Nonconservation exponent");
    c->add_option("--C1", o.C1, "Codimension of the mean");
    c->add_option("--alpha", o.alpha, "Levy index");
    c->add_option("--beta-a", o.beta_a, "Beta kernel shape a");
    c->add_option("--beta-b", o.beta_b, "Beta kernel shape b");
    c->add_option("--amplitude", o.amplitude, "Kernel mass");
    c->add_option("--c", o.c, "Output offset");
    c->add_option("--seed", o.seed, "Random seed");
}

int dispatch(const std::vector<std::string>& args, int depth) {
    Options o;
    CLI::App app{"Residence-time estimation by regularized deconvolution", "wrt"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Synthetic rainfall, kernel and noisy observation");
    add_common(sim, o);
    add_rain(sim, o);
    sim->add_option("--length", o.length, "Series length T");
    sim->add_option("--kernel-length", o.kernel_length, "Kernel length K");
    sim->add_option("--snr-db", o.snr_db, "Input SNR in dB, or 'inf'");

    auto* est = app.add_subcommand("estimate", "Estimate the kernel for one lambda or a selection strategy");
    add_common(est, o);
    add_io(est, o);
    est->add_option("--lambda", o.lambda, "Fixed regularization weight");
    est->add_option("--strategy", o.strategy, "oracle|discrepancy|fidelity|corr (default corr)");
    est->add_option("--grid", o.grid, "Lambda grid min,max,count (log spaced)");
    est->add_option("--noise-variance", o.noise_variance, "Noise variance for the discrepancy strategy");
    o.solver.add_to(est);

    auto* xc = app.add_subcommand("xcorr", "Cross-correlation baseline");
    add_common(xc, o);
    add_io(xc, o);
    xc->add_flag("--unbiased", o.unbiased, "Divide by the overlap instead of T");

    auto* sw = app.add_subcommand("sweep", "Solve over a lambda grid and report every strategy");
    add_common(sw, o);
    add_io(sw, o);
    sw->add_option("--grid", o.grid, "Lambda grid min,max,count (log spaced)");
    sw->add_option("--noise-variance", o.noise_variance, "Noise variance for the discrepancy strategy");
    o.solver.add_to(sw);

    auto* be = app.add_subcommand("bench", "Monte-Carlo comparison of strategies and the baseline");
    add_common(be, o);
    add_rain(be, o);
    be->add_option("--snr-levels", o.snr_levels, "Input SNR levels in dB")->delimiter(',');
    be->add_option("--trials", o.trials, "Trials per level");
    be->add_option("--lengths", o.lengths, "Series lengths")->delimiter(',');
    be->add_option("--support", o.support, "Kernel support (K/2)");
    be->add_option("--grid", o.grid, "Lambda grid min,max,count (log spaced)");
    be->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
    be->add_flag("--no-xcorr", o.no_xcorr, "Skip the cross-correlation baseline");
    o.solver.add_to(be);

    auto* rp = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
    rp->add_option("manifest", o.manifest, "manifest.json")->required();
    rp->add_option("--out", o.out, "Output directory (default: the recorded one)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub == rp) return cmd_replay(o, depth);
    if (!o.config_file.empty()) apply_config(sub, o.config_file);

    Run run;
    run.command = sub->get_name();
    run.out = o.out.empty() ? output_root() / run.command : fs::path(o.out);
    run.config = given_options(sub);

    if (sub == sim) return cmd_simulate(o, run);
    if (sub == est) return cmd_estimate(o, run);
    if (sub == xc) return cmd_xcorr(o, run);
    if (sub == sw) return cmd_sweep(o, run);
    return cmd_bench(o, run);
}

} // namespace

std::string version() { return WRT_VERSION; }

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args, 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const wrt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PartialFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace wrt::cli
