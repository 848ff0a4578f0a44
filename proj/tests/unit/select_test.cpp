#include "oracles.hpp"
#include "support.hpp"

#include "wrt/error.hpp"
#include "wrt/select.hpp"
#include "wrt/synth.hpp"

#include <cmath>
#include <limits>

using namespace wrt;
using select::Strategy;

TEST_CASE("snr in decibels") {
    const std::vector<double> m{3.0, 4.0};
    CHECK(select::snr_db(m, std::vector<double>{3.0, 3.0}) == doctest::Approx(27.958800173440753).epsilon(1e-12));
    CHECK(select::snr_db(m, std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(select::snr_db(m, m) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(select::snr_db(std::vector<double>{0.0, 0.0}, m), InvalidArgument);
    CHECK_THROWS_AS(select::snr_db(m, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("snr decreases with the error norm") {
    std::mt19937_64 rng(61);
    const auto m = test::random_vector(rng, 30);
    const auto dir = test::random_vector(rng, 30);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {1e-6, 1e-3, 0.1, 0.5, 2.0, 10.0}) {
        std::vector<double> est(30);
        for (std::size_t i = 0; i < 30; ++i) est[i] = m[i] + s * dir[i];
        const double v = select::snr_db(m, est);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("correlation coefficient") {
    std::mt19937_64 rng(62);
    const auto a = test::random_vector(rng, 40);
    std::vector<double> b(40), c(40);
    for (std::size_t i = 0; i < 40; ++i) {
        b[i] = 2.0 * a[i] + 7.0;
        c[i] = -a[i];
    }
    CHECK(select::corr_coeff(a, b) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(select::corr_coeff(a, c) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(select::corr_coeff(a, std::vector<double>(40, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(select::corr_coeff(std::vector<double>{1.0}, std::vector<double>{2.0}), InvalidArgument);

    for (int rep = 0; rep < 10; ++rep) {
        const auto u = test::random_vector(rng, 25);
        const auto v = test::random_vector(rng, 25);
        long double mu = 0, mv = 0;
        for (std::size_t i = 0; i < 25; ++i) {
            mu += u[i];
            mv += v[i];
        }
        mu /= 25;
        mv /= 25;
        long double suv = 0, suu = 0, svv = 0;
        for (std::size_t i = 0; i < 25; ++i) {
            suv += (u[i] - mu) * (v[i] - mv);
            suu += (u[i] - mu) * (u[i] - mu);
            svv += (v[i] - mv) * (v[i] - mv);
        }
        const double ref = static_cast<double>(suv / std::sqrt(suu * svv));
        CHECK(std::abs(select::corr_coeff(u, v) - ref) <= 1e-12);
    }
}

TEST_CASE("mean residence time") {
    std::vector<double> impulse(40, 0.0);
    impulse[20 + 17] = 1.0;
    CHECK(select::mean_residence_time(Kernel(impulse)) == doctest::Approx(17.0));
    CHECK(select::mean_residence_time(Kernel::causal(std::vector<double>(10, 1.0))) == doctest::Approx(4.5));
    const auto beta = synth::make_beta_kernel({2.0, 6.0, 500, 1.0});
    CHECK(std::abs(select::mean_residence_time(beta) - 125.0) <= 2.0);
    std::vector<double> scaled(beta.vector());
    for (double& v : scaled) v *= 37.5;
    CHECK(select::mean_residence_time(Kernel(scaled)) ==
          doctest::Approx(select::mean_residence_time(beta)).epsilon(1e-12));
    CHECK_THROWS_AS(select::mean_residence_time(Kernel::zeros(8)), InvalidArgument);
}

TEST_CASE("lambda grids") {
    const auto g = select::LambdaGrid::synthetic_default();
    REQUIRE(g.size() == 20);
    CHECK(g.values().front() == 1e-5);
    CHECK(g.values().back() == 1e12);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(std::log10(g.values()[i]) - std::log10(g.values()[i - 1]) == doctest::Approx(17.0 / 19.0));
    const auto r = select::LambdaGrid::real_data_default();
    CHECK(r.values().front() == 1e2);
    CHECK(r.values().back() == 1e8);
    CHECK(g.contains(1e12));
    CHECK_FALSE(g.contains(2.0));
    CHECK(select::LambdaGrid::log_spaced(3.0, 3.0, 1).values() == std::vector<double>{3.0});
    CHECK_THROWS_AS(select::LambdaGrid({}), InvalidArgument);
    CHECK_THROWS_AS(select::LambdaGrid({2.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(select::LambdaGrid({0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(select::LambdaGrid::log_spaced(1.0, 10.0, 0), InvalidArgument);
}

namespace {

select::SweepEntry entry(double lambda, double k_snr, double y_snr, double corr, double resvar) {
    select::SweepEntry e;
    e.lambda = lambda;
    e.result = DeconvResult{Kernel::zeros(2), 0.0, TimeSeries::constant(1, 0.0), {}, 1, true,
                            Termination::k_tolerance, lambda, true, {}};
    e.k_snr_db = k_snr;
    e.y_rec_snr_db = y_snr;
    e.y_corr_coeff = corr;
    e.residual_variance = resvar;
    return e;
}

} // namespace

TEST_CASE("strategies pick the extremum and break ties toward larger lambda") {
    select::SweepReport rep;
    rep.entries = {entry(1.0, 5.0, 10.0, 0.5, 4.0), entry(10.0, 9.0, 12.0, 0.9, 2.5),
                   entry(1e3, 12.0, 12.0, 0.8, 1.1), entry(1e4, 3.0, 8.0, 0.9, 0.7)};
    CHECK(select::select_lambda(rep, Strategy::oracle).chosen_lambda == 1e3);
    CHECK(select::select_lambda(rep, Strategy::fidelity).chosen_lambda == 1e3);
    CHECK(select::select_lambda(rep, Strategy::corr_coeff).chosen_lambda == 1e4);
    const auto d = select::select_lambda(rep, Strategy::discrepancy, 1.0);
    CHECK(d.chosen_lambda == 1e3);
    CHECK(d.criterion_value == doctest::Approx(0.1));
    CHECK(select::select_lambda(rep, Strategy::discrepancy, 0.0).chosen_lambda == 1e4);
    CHECK_THROWS_AS(select::select_lambda(rep, Strategy::discrepancy), InvalidArgument);

    // A failed entry is skipped.
    rep.entries[2].result.reset();
    CHECK(select::select_lambda(rep, Strategy::oracle).chosen_lambda == 10.0);

    select::SweepReport blind;
    blind.entries = {entry(1.0, 0.0, 1.0, 0.1, 1.0)};
    blind.entries[0].k_snr_db.reset();
    CHECK_THROWS_AS(select::select_lambda(blind, Strategy::oracle), InvalidArgument);
    CHECK_THROWS_AS(select::select_lambda(select::SweepReport{}, Strategy::fidelity), InvalidArgument);
}

TEST_CASE("strategy names") {
    CHECK(select::parse_strategy("corr") == Strategy::corr_coeff);
    CHECK(select::parse_strategy("corrCoeff") == Strategy::corr_coeff);
    CHECK(select::parse_strategy("oracle") == Strategy::oracle);
    CHECK(select::strategy_name(Strategy::corr_coeff) == "corrCoeff");
    CHECK_THROWS_AS(select::parse_strategy("gcv"), InvalidArgument);
}

TEST_CASE("sweep on a synthetic scenario") {
    const auto x = synth::simulate_rainfall({}, 512, 63);
    const auto k = synth::make_beta_kernel({2.0, 6.0, 40, 500.0});
    const auto sc = synth::synthesize_observation(x, k, 100.0, 20.0, 63);
    const auto grid = select::LambdaGrid::log_spaced(1e-2, 1e8, 6);
    const Deconvolver d(x, 80);
    const auto rep = select::sweep(d, sc.y_noisy, grid, SolverConfig{}, &k);
    REQUIRE(rep.entries.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& e = rep.entries[i];
        CHECK(e.lambda == grid.values()[i]);
        REQUIRE(e.ok());
        test::check_solver_output(*e.result);
        CHECK(e.y_rec_snr_db == select::snr_db(sc.y_noisy.values(), e.result->y_rec.values()));
        CHECK(*e.k_snr_db == select::snr_db(k.values(), e.result->k_est.values()));
    }
    const auto oracle_pick = select::select_lambda(rep, Strategy::oracle);
    CHECK(grid.contains(oracle_pick.chosen_lambda));
    for (Strategy s : select::kAllStrategies) {
        const auto pick = select::select_lambda(rep, s, sc.noise_variance);
        CHECK(*rep.entries[pick.index].k_snr_db <= oracle_pick.criterion_value);
        // Selection is a pure function of the report.
        const auto again = select::select_lambda(rep, s, sc.noise_variance);
        CHECK(again.index == pick.index);
        CHECK(again.chosen_result.k_est == pick.chosen_result.k_est);
    }

    // A single-value grid is one solver run.
    SolverConfig cfg;
    cfg.lambda = 100.0;
    const auto one = select::sweep(d, sc.y_noisy, select::LambdaGrid({100.0}), SolverConfig{});
    const auto direct = d.run(sc.y_noisy, cfg);
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].result->k_est == direct.k_est);
    CHECK_FALSE(one.entries[0].k_snr_db.has_value());
}
