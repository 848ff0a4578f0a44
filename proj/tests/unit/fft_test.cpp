#include "oracles.hpp"
#include "support.hpp"

#include "wrt/error.hpp"
#include "wrt/fft.hpp"

#include <cmath>

using namespace wrt;

TEST_CASE("next_pow2") {
    CHECK(fft::next_pow2(1) == 1);
    CHECK(fft::next_pow2(2) == 2);
    CHECK(fft::next_pow2(3) == 4);
    CHECK(fft::next_pow2(1000) == 1024);
    CHECK(fft::next_pow2(1024) == 1024);
}

TEST_CASE("forward and inverse transforms round trip") {
    std::mt19937_64 rng(21);
    for (std::size_t n : {8u, 64u, 1024u}) {
        const auto x = test::random_vector(rng, n);
        const auto back = fft::inverse(fft::forward(x, n), n);
        CHECK(oracle::relative_error(x, back) < 1e-14);
    }
    // DC bin holds the sum.
    const std::vector<double> ones(16, 1.0);
    CHECK(fft::forward(ones, 16)[0].real() == doctest::Approx(16.0));
}

TEST_CASE("linear convolver transform length leaves room for the full product") {
    std::mt19937_64 rng(22);
    for (std::size_t T : {1u, 7u, 64u, 100u}) {
        for (std::size_t K : {2u, 16u, 250u}) {
            const fft::LinearConvolver c(test::random_vector(rng, T), K);
            CHECK(c.transform_length() >= T + K - 1);
            CHECK(c.signal_length() == T);
            CHECK(c.kernel_length() == K);
        }
    }
}

TEST_CASE("correlate is the adjoint of convolve") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t T = 5 + static_cast<std::size_t>(rep) * 7;
        const std::size_t K = 2 * (1 + static_cast<std::size_t>(rep) % 9);
        const auto x = test::random_vector(rng, T);
        const fft::LinearConvolver c(x, K);
        const auto k = test::random_vector(rng, K);
        const auto v = test::random_vector(rng, T);
        const auto xk = c.convolve(k);
        const auto xtv = c.correlate(v);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t t = 0; t < T; ++t) lhs += xk[t] * v[t];
        for (std::size_t j = 0; j < K; ++j) rhs += k[j] * xtv[j];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

        const auto X = oracle::toeplitz(x, K);
        CHECK(oracle::relative_error(oracle::multiply(oracle::transpose(X), v), xtv) < 1e-12);
    }
}

TEST_CASE("convolver rejects mismatched spans") {
    const fft::LinearConvolver c(std::vector<double>{1.0, 2.0, 3.0}, 4);
    CHECK_THROWS_AS(c.convolve(std::vector<double>(3)), InvalidArgument);
    CHECK_THROWS_AS(c.correlate(std::vector<double>(4)), InvalidArgument);
}
