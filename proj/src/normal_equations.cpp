#include "wrt/error.hpp"
#include "wrt/fft.hpp"
#include "wrt/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace wrt {
namespace {

// r[d] = sum_u x[u] x[u - d] for d in [0, n_lags).
std::vector<double> autocorrelation(std::span<const double> x, std::size_t n_lags) {
    const std::size_t N = fft::next_pow2(2 * x.size());
    auto spec = fft::forward(x, N);
    for (auto& s : spec) s = std::norm(s);
    auto full = fft::inverse(spec, N);
    std::vector<double> r(n_lags, 0.0);
    for (std::size_t d = 0; d < n_lags && d < x.size(); ++d) r[d] = full[d];
    return r;
}

} // namespace

struct NormalEquations::Impl {
    std::size_t K = 0;
    fft::LinearConvolver conv;
    Eigen::MatrixXd gram;

    Impl(std::span<const double> x, std::size_t k) : K(k), conv(x, k), gram(k, k) {}
};

struct NormalEquations::Factor::Impl {
    Eigen::LLT<Eigen::MatrixXd> llt;
};

NormalEquations::NormalEquations(std::span<const double> x, std::size_t kernel_length)
    : impl_(std::make_unique<Impl>(x, kernel_length)) {
    const std::size_t K = kernel_length;
    const auto T = static_cast<long>(x.size());
    const long half = static_cast<long>(K / 2);
    auto xv = [&](long t) { return (t >= 0 && t < T) ? x[static_cast<std::size_t>(t)] : 0.0; };
    auto lag = [&](std::size_t i) { return static_cast<long>(i) - half; };

    // G(i, j) = sum_t x[t - lag_i] x[t - lag_j] over t in [0, T).
    // Row 0 (lag -K/2): sum over u in [max(K/2, j), T) of x[u] x[u - j], i.e.
    // the autocorrelation minus the head the shifted window cannot reach.
    const auto r = autocorrelation(x, K);
    Eigen::MatrixXd& G = impl_->gram;
    for (std::size_t j = 0; j < K; ++j) {
        double g = r[j];
        for (long u = static_cast<long>(j); u < std::min(half, T); ++u) g -= xv(u) * xv(u - static_cast<long>(j));
        G(0, static_cast<long>(j)) = g;
    }
    // Shifting both lags by one moves the summation window by one sample:
    // G(i+1, j+1) = G(i, j) + x[-1 - lag_i] x[-1 - lag_j] - x[T-1 - lag_i] x[T-1 - lag_j].
    for (std::size_t d = 0; d < K; ++d) {
        for (std::size_t i = 0; i + d + 1 < K; ++i) {
            const std::size_t j = i + d;
            const long li = lag(i), lj = lag(j);
            G(static_cast<long>(i + 1), static_cast<long>(j + 1)) =
                G(static_cast<long>(i), static_cast<long>(j)) + xv(-1 - li) * xv(-1 - lj) -
                xv(T - 1 - li) * xv(T - 1 - lj);
        }
    }
    G.triangularView<Eigen::StrictlyLower>() = G.transpose();
}

NormalEquations::~NormalEquations() = default;
NormalEquations::NormalEquations(NormalEquations&&) noexcept = default;
NormalEquations& NormalEquations::operator=(NormalEquations&&) noexcept = default;

std::size_t NormalEquations::kernel_length() const noexcept { return impl_->K; }
const fft::LinearConvolver& NormalEquations::convolver() const noexcept { return impl_->conv; }

std::vector<double> NormalEquations::gram() const {
    const std::size_t K = impl_->K;
    std::vector<double> out(K * K);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out.data(), static_cast<long>(K), static_cast<long>(K)) = impl_->gram;
    return out;
}

NormalEquations::Factor::Factor(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
NormalEquations::Factor::~Factor() = default;
NormalEquations::Factor::Factor(Factor&&) noexcept = default;
NormalEquations::Factor& NormalEquations::Factor::operator=(Factor&&) noexcept = default;

std::vector<double> NormalEquations::Factor::solve(std::span<const double> rhs) const {
    const auto n = impl_->llt.rows();
    if (static_cast<long>(rhs.size()) != n) throw InvalidArgument("normal equations: rhs length mismatch");
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
    const Eigen::VectorXd sol = impl_->llt.solve(b);
    if (!sol.allFinite()) throw NumericalFailure("normal equations: non-finite solution");
    return {sol.data(), sol.data() + n};
}

NormalEquations::Factor NormalEquations::factorize(double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("normal equations: lambda must be finite and >= 0");
    const long K = static_cast<long>(impl_->K);
    Eigen::MatrixXd A = impl_->gram;
    // D^T D for forward differences: tridiagonal, diagonal (1, 2, ..., 2, 1).
    for (long i = 0; i < K; ++i) {
        A(i, i) += lambda * ((i == 0 || i == K - 1) ? 1.0 : 2.0);
        if (i + 1 < K) {
            A(i, i + 1) -= lambda;
            A(i + 1, i) -= lambda;
        }
    }
    auto impl = std::make_unique<Factor::Impl>();
    impl->llt.compute(A);
    if (impl->llt.info() != Eigen::Success)
        throw NumericalFailure("normal matrix X^T X + lambda D^T D is not positive definite "
                               "(lambda = " + std::to_string(lambda) +
                               "); the input signal does not determine the kernel");
    const double rcond = impl->llt.rcond();
    if (!(rcond > 1e-15))
        throw NumericalFailure("normal matrix X^T X + lambda D^T D is singular to working "
                               "precision (reciprocal condition " + std::to_string(rcond) +
                               ", lambda = " + std::to_string(lambda) + ")");
    return Factor(std::move(impl));
}

} // namespace wrt
