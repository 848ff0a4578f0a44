#pragma once
// Data-parallel inner loops used by the solver and the FFT convolution.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at first use from the CPU feature set; WRT_SIMD=scalar|avx2|neon
// in the environment overrides the choice. Elementwise kernels are bitwise
// identical across backends; reductions agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wrt::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

// Backends compiled in and supported by the running CPU; scalar is always first.
std::vector<Backend> available_backends();

Backend active_backend();

// Returns false (and leaves the active backend unchanged) when `b` is not
// available on this machine. Not thread-safe against concurrent kernel calls.
bool set_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double squared_norm(std::span<const double> a);
// sum_i (a[i] - b[i])^2
double squared_distance(std::span<const double> a, std::span<const double> b);
// sum_i (a[i+1] - a[i])^2
double adjacent_difference_energy(std::span<const double> a);

// out[i] = (a[i+1] - a[i]), out.size() == a.size() - 1
void adjacent_difference(std::span<const double> a, std::span<double> out);

// out[i] = 0 for i < first_free, else max(0, (1 - alpha) * from[i] + alpha * to[i]).
void blend_project(std::span<const double> from, std::span<const double> to, double alpha,
                   std::size_t first_free, std::span<double> out);

// out[i] = y[i] - z[i] - offset
void residual(std::span<const double> y, std::span<const double> z, double offset,
              std::span<double> out);

// Interleaved complex product, out[j] = a[j] * b[j] for j < n_complex;
// spans hold 2 * n_complex doubles. `out` may alias `a`.
void complex_multiply(std::span<const double> a, std::span<const double> b,
                      std::span<double> out);
// out[j] = conj(a[j]) * b[j]
void complex_multiply_conj(std::span<const double> a, std::span<const double> b,
                           std::span<double> out);

} // namespace wrt::simd
