// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// only reached after the dispatcher has confirmed CPU support.
#include "kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>

namespace wrt::simd::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
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
    for (; i + 4 <= m; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i + 1), _mm256_loadu_pd(a + i)));
    for (; i < m; ++i) out[i] = a[i + 1] - a[i];
}

void blend_project(const double* from, const double* to, double alpha, std::size_t first_free,
                   std::size_t n, double* out) {
    const double beta = 1.0 - alpha;
    const std::size_t zeros = std::min(first_free, n);
    std::fill(out, out + zeros, 0.0);
    const __m256d va = _mm256_set1_pd(alpha), vb = _mm256_set1_pd(beta);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = zeros;
    // Separate multiply and add keep results bitwise equal to the scalar path.
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_add_pd(_mm256_mul_pd(vb, _mm256_loadu_pd(from + i)),
                                        _mm256_mul_pd(va, _mm256_loadu_pd(to + i)));
        // max(v, 0) with NaN propagation matching `v > 0 ? v : 0`
        const __m256d mask = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + i, _mm256_and_pd(mask, v));
    }
    for (; i < n; ++i) {
        const double v = beta * from[i] + alpha * to[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void residual(const double* y, const double* z, double offset, std::size_t n, double* out) {
    const __m256d vc = _mm256_set1_pd(offset);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(z + i)), vc));
    for (; i < n; ++i) out[i] = (y[i] - z[i]) - offset;
}

void complex_multiply(const double* a, const double* b, std::size_t n_complex, double* out) {
    std::size_t j = 0;
    for (; j + 2 <= n_complex; j += 2) {
        const __m256d va = _mm256_loadu_pd(a + 2 * j);
        const __m256d vb = _mm256_loadu_pd(b + 2 * j);
        const __m256d b_re = _mm256_movedup_pd(vb);
        const __m256d b_im = _mm256_permute_pd(vb, 0xF);
        const __m256d a_sw = _mm256_permute_pd(va, 0x5);
        const __m256d t1 = _mm256_mul_pd(va, b_re);
        const __m256d t2 = _mm256_mul_pd(a_sw, b_im);
        _mm256_storeu_pd(out + 2 * j, _mm256_addsub_pd(t1, t2));
    }
    for (; j < n_complex; ++j) {
        const double ar = a[2 * j], ai = a[2 * j + 1];
        const double br = b[2 * j], bi = b[2 * j + 1];
        out[2 * j] = ar * br - ai * bi;
        out[2 * j + 1] = ar * bi + ai * br;
    }
}

void complex_multiply_conj(const double* a, const double* b, std::size_t n_complex, double* out) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t j = 0;
    for (; j + 2 <= n_complex; j += 2) {
        const __m256d va = _mm256_loadu_pd(a + 2 * j);
        const __m256d vb = _mm256_loadu_pd(b + 2 * j);
        const __m256d a_re = _mm256_movedup_pd(va);
        const __m256d a_im = _mm256_permute_pd(va, 0xF);
        const __m256d b_sw = _mm256_permute_pd(vb, 0x5);
        const __m256d t1 = _mm256_mul_pd(vb, a_re);
        const __m256d t2 = _mm256_xor_pd(_mm256_mul_pd(b_sw, a_im), sign);
        _mm256_storeu_pd(out + 2 * j, _mm256_addsub_pd(t1, t2));
    }
    for (; j < n_complex; ++j) {
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

const KernelTable* avx2_table() noexcept { return &kTable; }

} // namespace wrt::simd::detail

#else

namespace wrt::simd::detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
} // namespace wrt::simd::detail

#endif
