#include "kernels.hpp"

#include <algorithm>

namespace wrt::simd::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double adjacent_difference_energy(const double* a, std::size_t n) {
    if (n < 2) return 0.0;
    return squared_distance(a + 1, a, n - 1);
}

void adjacent_difference(const double* a, std::size_t n, double* out) {
    for (std::size_t i = 0; i + 1 < n; ++i) out[i] = a[i + 1] - a[i];
}

void blend_project(const double* from, const double* to, double alpha, std::size_t first_free,
                   std::size_t n, double* out) {
    const double beta = 1.0 - alpha;
    const std::size_t zeros = std::min(first_free, n);
    for (std::size_t i = 0; i < zeros; ++i) out[i] = 0.0;
    for (std::size_t i = zeros; i < n; ++i) {
        const double v = beta * from[i] + alpha * to[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void residual(const double* y, const double* z, double offset, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (y[i] - z[i]) - offset;
}

void complex_multiply(const double* a, const double* b, std::size_t n_complex, double* out) {
    for (std::size_t j = 0; j < n_complex; ++j) {
        const double ar = a[2 * j], ai = a[2 * j + 1];
        const double br = b[2 * j], bi = b[2 * j + 1];
        out[2 * j] = ar * br - ai * bi;
        out[2 * j + 1] = ar * bi + ai * br;
    }
}

void complex_multiply_conj(const double* a, const double* b, std::size_t n_complex, double* out) {
    for (std::size_t j = 0; j < n_complex; ++j) {
        const double ar = a[2 * j], ai = a[2 * j + 1];
        const double br = b[2 * j], bi = b[2 * j + 1];
        out[2 * j] = ar * br + ai * bi;
        out[2 * j + 1] = ar * bi - ai * br;
    }
}

constexpr KernelTable kTable{
    dot,      sum,      squared_distance, adjacent_difference_energy, adjacent_difference,
    blend_project, residual, complex_multiply, complex_multiply_conj,
};

} // namespace

const KernelTable& scalar_table() noexcept { return kTable; }

} // namespace wrt::simd::detail
