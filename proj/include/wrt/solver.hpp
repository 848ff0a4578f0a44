#pragma once
// Alternating minimization for the constrained, smoothness-regularized
// deconvolution
//
//     J(k, c) = 1/2 ||y - x * k - c||^2 + lambda ||D k||^2,
//     k causal and nonnegative,
//
// alternating projected Newton updates of k with the closed-form update of c.

#include "wrt/fft.hpp"
#include "wrt/signals.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wrt {

struct SolverConfig {
    double lambda = 1.0;
    double alpha_min = 1e-6;
    double k_err_min = 1e-8;
    double y_err_min = 1e-8;
    int s_max = 200;
    int t_max = 100;
    double shrink = 0.9;

    void validate() const;
};

enum class Termination {
    k_tolerance,   // relative kernel change below k_err_min
    y_tolerance,   // relative reconstruction change below y_err_min
    step_floor,    // backtracking step fell below alpha_min
    outer_cap,     // s_max reached
    inner_cap,     // t_max backtracking steps without descent
    not_iterative, // closed-form estimator (cross-correlation)
};

std::string_view termination_name(Termination t) noexcept;

struct DeconvResult {
    Kernel k_est;
    double c_est = 0.0;
    TimeSeries y_rec;
    std::vector<double> objective_trace;
    int outer_iterations = 0;
    bool converged = false;
    Termination termination = Termination::not_iterative;
    double lambda = 0.0;
    // Every accepted iterate was causal and nonnegative (checked exactly).
    bool iterates_feasible = true;
    std::vector<std::string> warnings;
};

// The normal matrix X^T X (K x K) of the linear-convolution operator of x,
// assembled from FFT autocorrelations with exact boundary corrections, and
// the spectral convolver used for X k and X^T v.
class NormalEquations {
public:
    NormalEquations(std::span<const double> x, std::size_t kernel_length);
    ~NormalEquations();
    NormalEquations(NormalEquations&&) noexcept;
    NormalEquations& operator=(NormalEquations&&) noexcept;

    std::size_t kernel_length() const noexcept;
    const fft::LinearConvolver& convolver() const noexcept;

    // Row-major K x K copy of X^T X.
    std::vector<double> gram() const;

    // Cholesky factor of X^T X + lambda D^T D. Throws NumericalFailure when the
    // matrix is not numerically positive definite.
    class Factor {
    public:
        ~Factor();
        Factor(Factor&&) noexcept;
        Factor& operator=(Factor&&) noexcept;
        std::vector<double> solve(std::span<const double> rhs) const;

    private:
        friend class NormalEquations;
        struct Impl;
        explicit Factor(std::unique_ptr<Impl> impl);
        std::unique_ptr<Impl> impl_;
    };

    Factor factorize(double lambda) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Solver bound to one input series and kernel length. The normal matrix is
// built once and shared by every lambda; run_am is const and may be called
// concurrently.
class Deconvolver {
public:
    Deconvolver(const TimeSeries& x, std::size_t kernel_length);

    std::size_t kernel_length() const noexcept { return normal_.kernel_length(); }
    const TimeSeries& input() const noexcept { return x_; }
    const NormalEquations& normal_equations() const noexcept { return normal_; }

    // Unconstrained regularized least-squares kernel (X^T X + lambda D^T D)^-1 X^T y_hat.
    Kernel newton_step(const TimeSeries& y_hat, double lambda) const;

    DeconvResult run(const TimeSeries& y, const SolverConfig& config,
                     const Kernel* warm_start = nullptr) const;

private:
    TimeSeries x_;
    NormalEquations normal_;
};

Kernel newton_step(const TimeSeries& x, const TimeSeries& y_hat, double lambda, std::size_t K);

// Mean of y - x * k.
double estimate_c(const TimeSeries& y, const TimeSeries& x, const Kernel& k);

double evaluate_objective(const TimeSeries& x, const TimeSeries& y, const Kernel& k, double c,
                          double lambda);

DeconvResult run_am(const TimeSeries& x, const TimeSeries& y, std::size_t K,
                    const SolverConfig& config);

} // namespace wrt
