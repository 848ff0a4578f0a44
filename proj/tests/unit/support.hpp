#pragma once

#include "wrt/signals.hpp"
#include "wrt/solver.hpp"

#include <doctest.h>

#include <random>
#include <vector>

namespace test {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& a : v) a = u(rng);
    return v;
}

// Exact check: negative lags identically zero, no negative entry.
inline bool strictly_feasible(const wrt::Kernel& k) {
    const auto v = k.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j < k.half_length() && v[j] != 0.0) return false;
        if (v[j] < 0.0) return false;
    }
    return true;
}

inline void check_solver_output(const wrt::DeconvResult& r) {
    CHECK(strictly_feasible(r.k_est));
    CHECK(r.iterates_feasible);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1]);
}

} // namespace test
