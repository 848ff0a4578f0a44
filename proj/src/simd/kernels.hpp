#pragma once

#include <cstddef>

namespace wrt::simd::detail {

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    double (*adjacent_difference_energy)(const double* a, std::size_t n);
    void (*adjacent_difference)(const double* a, std::size_t n, double* out);
    void (*blend_project)(const double* from, const double* to, double alpha, std::size_t first_free,
                          std::size_t n, double* out);
    void (*residual)(const double* y, const double* z, double offset, std::size_t n, double* out);
    void (*complex_multiply)(const double* a, const double* b, std::size_t n_complex, double* out);
    void (*complex_multiply_conj)(const double* a, const double* b, std::size_t n_complex,
                                  double* out);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

} // namespace wrt::simd::detail
