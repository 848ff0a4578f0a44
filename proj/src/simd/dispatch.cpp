#include "wrt/simd.hpp"

#include "kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

namespace wrt::simd {
namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::scalar: return &detail::scalar_table();
    case Backend::avx2: return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Backend::neon: return detail::neon_table();
    }
    return nullptr;
}

struct Active {
    std::atomic<const KernelTable*> table{nullptr};
    std::atomic<Backend> backend{Backend::scalar};
};

Active& active() {
    static Active state;
    return state;
}

Backend pick_default() {
    if (const char* env = std::getenv("WRT_SIMD")) {
        const std::string want(env);
        for (Backend b : available_backends())
            if (backend_name(b) == want) return b;
    }
    const auto all = available_backends();
    return all.back();
}

const KernelTable& table() {
    auto& st = active();
    const KernelTable* t = st.table.load(std::memory_order_acquire);
    if (t == nullptr) {
        const Backend b = pick_default();
        st.backend.store(b, std::memory_order_relaxed);
        t = table_for(b);
        st.table.store(t, std::memory_order_release);
    }
    return *t;
}

void check_same(std::size_t a, std::size_t b) {
    assert(a == b);
    (void)a;
    (void)b;
}

} // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::scalar};
    if (table_for(Backend::avx2) != nullptr) out.push_back(Backend::avx2);
    if (table_for(Backend::neon) != nullptr) out.push_back(Backend::neon);
    return out;
}

Backend active_backend() {
    (void)table();
    return active().backend.load(std::memory_order_relaxed);
}

bool set_backend(Backend b) {
    const KernelTable* t = table_for(b);
    if (t == nullptr) return false;
    active().backend.store(b, std::memory_order_relaxed);
    active().table.store(t, std::memory_order_release);
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size());
    return table().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return table().sum(a.data(), a.size()); }

double squared_norm(std::span<const double> a) { return table().dot(a.data(), a.data(), a.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size());
    return table().squared_distance(a.data(), b.data(), a.size());
}

double adjacent_difference_energy(std::span<const double> a) {
    return table().adjacent_difference_energy(a.data(), a.size());
}

void adjacent_difference(std::span<const double> a, std::span<double> out) {
    if (a.empty()) return;
    check_same(out.size(), a.size() - 1);
    table().adjacent_difference(a.data(), a.size(), out.data());
}

void blend_project(std::span<const double> from, std::span<const double> to, double alpha,
                   std::size_t first_free, std::span<double> out) {
    check_same(from.size(), to.size());
    check_same(from.size(), out.size());
    table().blend_project(from.data(), to.data(), alpha, first_free, out.size(), out.data());
}

void residual(std::span<const double> y, std::span<const double> z, double offset,
              std::span<double> out) {
    check_same(y.size(), z.size());
    check_same(y.size(), out.size());
    table().residual(y.data(), z.data(), offset, y.size(), out.data());
}

void complex_multiply(std::span<const double> a, std::span<const double> b,
                      std::span<double> out) {
    check_same(a.size(), b.size());
    check_same(a.size(), out.size());
    table().complex_multiply(a.data(), b.data(), a.size() / 2, out.data());
}

void complex_multiply_conj(std::span<const double> a, std::span<const double> b,
                           std::span<double> out) {
    check_same(a.size(), b.size());
    check_same(a.size(), out.size());
    table().complex_multiply_conj(a.data(), b.data(), a.size() / 2, out.data());
}

} // namespace wrt::simd
