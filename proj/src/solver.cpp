#include "wrt/solver.hpp"

#include "wrt/error.hpp"
#include "wrt/simd.hpp"

#include <algorithm>
#include <cmath>

namespace wrt {
namespace {

double mean(std::span<const double> v) { return simd::sum(v) / static_cast<double>(v.size()); }

bool feasible(std::span<const double> k) {
    const std::size_t half = k.size() / 2;
    for (std::size_t i = 0; i < half; ++i)
        if (k[i] != 0.0) return false;
    for (std::size_t i = half; i < k.size(); ++i)
        if (!(k[i] >= 0.0)) return false;
    return true;
}

// Relative squared change ||a - b||^2 / ||a||^2, 0 when both vanish.
double relative_change(std::span<const double> now, std::span<const double> before) {
    const double num = simd::squared_distance(now, before);
    const double den = simd::squared_norm(now);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// Relative squared change of the reconstruction when X k_old becomes X k_new.
double relative_change(std::span<const double> y_rec, std::span<const double> xk_new,
                       std::span<const double> xk_old) {
    const double num = simd::squared_distance(xk_new, xk_old);
    const double den = simd::squared_norm(y_rec);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// Evaluates J for one (k, c) pair with reusable scratch.
class Objective {
public:
    Objective(const fft::LinearConvolver& conv, std::span<const double> y, double lambda)
        : conv_(conv), y_(y), lambda_(lambda), xk_(y.size()), res_(y.size()) {}

    double operator()(std::span<const double> k, double c) {
        conv_.convolve(k, xk_);
        simd::residual(y_, xk_, c, res_);
        const double value =
            0.5 * simd::squared_norm(res_) + lambda_ * simd::adjacent_difference_energy(k);
        if (!std::isfinite(value)) throw NumericalFailure("objective evaluated to a non-finite value");
        return value;
    }

    // x * k from the last evaluation.
    std::span<const double> last_convolution() const { return xk_; }

private:
    const fft::LinearConvolver& conv_;
    std::span<const double> y_;
    double lambda_;
    std::vector<double> xk_;
    std::vector<double> res_;
};

} // namespace

void SolverConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("solver: lambda must be finite and >= 0");
    if (!(alpha_min > 0.0)) throw InvalidArgument("solver: alpha_min must be > 0");
    if (!(k_err_min > 0.0)) throw InvalidArgument("solver: k_err_min must be > 0");
    if (!(y_err_min > 0.0)) throw InvalidArgument("solver: y_err_min must be > 0");
    if (s_max < 1 || t_max < 1) throw InvalidArgument("solver: iteration caps must be >= 1");
    if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("solver: shrink must lie in (0, 1)");
}

std::string_view termination_name(Termination t) noexcept {
    switch (t) {
    case Termination::k_tolerance: return "k_tolerance";
    case Termination::y_tolerance: return "y_tolerance";
    case Termination::step_floor: return "step_floor";
    case Termination::outer_cap: return "outer_cap";
    case Termination::inner_cap: return "inner_cap";
    case Termination::not_iterative: return "not_iterative";
    }
    return "unknown";
}

Deconvolver::Deconvolver(const TimeSeries& x, std::size_t kernel_length)
    : x_(x), normal_(x.values(), kernel_length) {}

Kernel Deconvolver::newton_step(const TimeSeries& y_hat, double lambda) const {
    if (y_hat.size() != x_.size()) throw InvalidArgument("newton_step: y_hat and x lengths differ");
    const auto factor = normal_.factorize(lambda);
    return Kernel(factor.solve(normal_.convolver().correlate(y_hat.values())));
}

DeconvResult Deconvolver::run(const TimeSeries& y, const SolverConfig& config,
                              const Kernel* warm_start) const {
    config.validate();
    const std::size_t T = x_.size();
    const std::size_t K = kernel_length();
    if (y.size() != T) throw InvalidArgument("run_am: x and y must have the same length");
    if (!x_.is_nonnegative()) throw InvalidArgument("run_am: input rainfall must be nonnegative");
    if (warm_start != nullptr && warm_start->size() != K)
        throw InvalidArgument("run_am: warm start has the wrong length");

    DeconvResult result{Kernel::zeros(K), 0.0, TimeSeries::constant(T, 0.0), {}, 0, false,
                        Termination::outer_cap, config.lambda, true, {}};
    if (K > T)
        result.warnings.push_back("kernel length " + std::to_string(K) + " exceeds series length " +
                                  std::to_string(T) + "; the problem is under-determined");

    const auto& conv = normal_.convolver();
    const auto factor = normal_.factorize(config.lambda);
    // Newton's step is affine in c: A^-1 X^T (y - c) = p - c q.
    const std::vector<double> p = factor.solve(conv.correlate(y.values()));
    const std::vector<double> q = factor.solve(conv.correlate(std::vector<double>(T, 1.0)));
    std::vector<double> delta(K);
    auto newton_for = [&](double c) {
        for (std::size_t i = 0; i < K; ++i) delta[i] = p[i] - c * q[i];
    };

    Objective J(conv, y.values(), config.lambda);
    const std::size_t first_free = K / 2;

    std::vector<double> k(K, 0.0);
    double c = mean(y.values());
    if (warm_start != nullptr) {
        k = warm_start->vector();
        project_causal_nonneg(k);
        J(k, c);
        std::vector<double> r(T);
        simd::residual(y.values(), J.last_convolution(), 0.0, r);
        c = mean(r);
    }
    double j_ref = J(k, c);
    std::vector<double> y_rec(T), y_rec_old(T), cand(K), xk(T), r(T);
    conv.convolve(k, xk);
    for (std::size_t t = 0; t < T; ++t) y_rec[t] = xk[t] + c;

    for (int s = 1;; ++s) {
        result.outer_iterations = s;
        newton_for(c);

        // Backtracking on convex combinations of the incumbent and Newton's step.
        double alpha = 1.0;
        bool accepted = false;
        double j_new = j_ref;
        double full_step_change = 0.0;
        for (int t = 1; t <= config.t_max; ++t) {
            simd::blend_project(k, delta, alpha, first_free, cand);
            j_new = J(cand, c);
            if (t == 1) full_step_change = relative_change(y_rec, J.last_convolution(), xk);
            if (j_new <= j_ref) {
                accepted = true;
                break;
            }
            alpha *= config.shrink;
            if (alpha < config.alpha_min) break;
        }
        if (!accepted) {
            // A full step that barely moves the reconstruction only fails the
            // descent test through rounding: the iterate is already stationary.
            if (full_step_change < config.y_err_min)
                result.termination = Termination::y_tolerance;
            else
                result.termination = alpha < config.alpha_min ? Termination::step_floor : Termination::inner_cap;
            result.converged = result.termination != Termination::inner_cap;
            break;
        }
        if (!feasible(cand)) result.iterates_feasible = false;
        const double k_err = relative_change(cand, k);
        k.swap(cand);
        result.objective_trace.push_back(j_new);

        // Closed-form offset for the accepted kernel.
        std::copy(J.last_convolution().begin(), J.last_convolution().end(), xk.begin());
        simd::residual(y.values(), xk, 0.0, r);
        c = mean(r);
        y_rec.swap(y_rec_old);
        for (std::size_t t = 0; t < T; ++t) y_rec[t] = xk[t] + c;
        const double y_err = relative_change(y_rec, y_rec_old);
        j_ref = J(k, c);

        if (k_err < config.k_err_min) {
            result.termination = Termination::k_tolerance;
            result.converged = true;
            break;
        }
        if (y_err < config.y_err_min) {
            result.termination = Termination::y_tolerance;
            result.converged = true;
            break;
        }
        if (s >= config.s_max) {
            result.termination = Termination::outer_cap;
            result.converged = false;
            break;
        }
    }

    // Recompute the reconstruction from the final (k, c) so it is exactly x * k + c.
    conv.convolve(k, xk);
    for (std::size_t t = 0; t < T; ++t) y_rec[t] = xk[t] + c;
    result.k_est = Kernel(std::move(k));
    result.c_est = c;
    result.y_rec = TimeSeries(std::move(y_rec));
    return result;
}

Kernel newton_step(const TimeSeries& x, const TimeSeries& y_hat, double lambda, std::size_t K) {
    return Deconvolver(x, K).newton_step(y_hat, lambda);
}

double estimate_c(const TimeSeries& y, const TimeSeries& x, const Kernel& k) {
    if (y.size() != x.size()) throw InvalidArgument("estimate_c: x and y lengths differ");
    const auto xk = convolve(x, k);
    std::vector<double> r(y.size());
    simd::residual(y.values(), xk.values(), 0.0, r);
    return mean(r);
}

double evaluate_objective(const TimeSeries& x, const TimeSeries& y, const Kernel& k, double c,
                          double lambda) {
    if (y.size() != x.size()) throw InvalidArgument("evaluate_objective: x and y lengths differ");
    const fft::LinearConvolver conv(x.values(), k.size());
    Objective J(conv, y.values(), lambda);
    return J(k.values(), c);
}

DeconvResult run_am(const TimeSeries& x, const TimeSeries& y, std::size_t K, const SolverConfig& config) {
    return Deconvolver(x, K).run(y, config);
}

} // namespace wrt
