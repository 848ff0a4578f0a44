// NEON variants for aarch64, where Advanced SIMD is part of the base ISA.
#include "kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>

namespace wrt::simd::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        acc0 = vfmaq_f64(acc0, d0, d0);
        acc1 = vfmaq_f64(acc1, d1, d1);
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) {
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
    if (n < 2) return;
    const std::size_t m = n - 1;
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i + 1), vld1q_f64(a + i)));
    for (; i < m; ++i) out[i] = a[i + 1] - a[i];
}

void blend_project(const double* from, const double* to, double alpha, std::size_t first_free,
                   std::size_t n, double* out) {
    const double beta = 1.0 - alpha;
    const std::size_t zeros = std::min(first_free, n);
    std::fill(out, out + zeros, 0.0);
    const float64x2_t va = vdupq_n_f64(alpha), vb = vdupq_n_f64(beta), zero = vdupq_n_f64(0.0);
    std::size_t i = zeros;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v =
            vaddq_f64(vmulq_f64(vb, vld1q_f64(from + i)), vmulq_f64(va, vld1q_f64(to + i)));
        const uint64x2_t mask = vcgtq_f64(v, zero);
        vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(v))));
    }
    for (; i < n; ++i) {
        const double v = beta * from[i] + alpha * to[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void residual(const double* y, const double* z, double offset, std::size_t n, double* out) {
    const float64x2_t vc = vdupq_n_f64(offset);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vsubq_f64(vsubq_f64(vld1q_f64(y + i), vld1q_f64(z + i)), vc));
    for (; i < n; ++i) out[i] = (y[i] - z[i]) - offset;
}

// One complex value per register; the scalar formula is kept term for term.
void complex_multiply(const double* a, const double* b, std::size_t n_complex, double* out) {
    for (std::size_t j = 0; j < n_complex; ++j) {
        const float64x2_t va = vld1q_f64(a + 2 * j);
        const float64x2_t vb = vld1q_f64(b + 2 * j);
        const float64x2_t t1 = vmulq_laneq_f64(va, vb, 0);                  // ar br, ai br
        const float64x2_t t2 = vmulq_laneq_f64(vextq_f64(va, va, 1), vb, 1); // ai bi, ar bi
        const double re = vgetq_lane_f64(t1, 0) - vgetq_lane_f64(t2, 0);
        const double im = vgetq_lane_f64(t2, 1) + vgetq_lane_f64(t1, 1);
        out[2 * j] = re;
        out[2 * j + 1] = im;
    }
}

void complex_multiply_conj(const double* a, const double* b, std::size_t n_complex, double* out) {
    for (std::size_t j = 0; j < n_complex; ++j) {
        const float64x2_t va = vld1q_f64(a + 2 * j);
        const float64x2_t vb = vld1q_f64(b + 2 * j);
        const float64x2_t t1 = vmulq_laneq_f64(vb, va, 0);                  // br ar, bi ar
        const float64x2_t t2 = vmulq_laneq_f64(vextq_f64(vb, vb, 1), va, 1); // bi ai, br ai
        out[2 * j] = vgetq_lane_f64(t1, 0) + vgetq_lane_f64(t2, 0);
        out[2 * j + 1] = vgetq_lane_f64(t1, 1) - vgetq_lane_f64(t2, 1);
    }
}

constexpr KernelTable kTable{
    dot,      sum,      squared_distance, adjacent_difference_energy, adjacent_difference,
    blend_project, residual, complex_multiply, complex_multiply_conj,
};

} // namespace

const KernelTable* neon_table() noexcept { return &kTable; }

} // namespace wrt::simd::detail

#else

namespace wrt::simd::detail {
const KernelTable* neon_table() noexcept { return nullptr; }
} // namespace wrt::simd::detail

#endif
