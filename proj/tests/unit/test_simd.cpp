#include <doctest.h>

#include <algorithm>
#include <vector>

#include "pdlab/rng.hpp"
#include "pdlab/simd/kernels.hpp"

using namespace pdlab;
namespace ks = pdlab::simd;

namespace {

std::vector<std::uint64_t> random_values(std::size_t n, std::uint64_t bound, std::uint64_t seed) {
    RandomStream rng(seed, 0);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng.below(bound);
    return v;
}

std::size_t naive_zero_count(const std::vector<std::uint64_t>& c, std::uint64_t m, std::uint64_t lo,
                             std::uint64_t hi) {
    std::size_t n = 0;
    for (std::uint64_t r = lo; r < hi; ++r) {
        unsigned __int128 acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * r + *it) % m;
        n += acc == 0;
    }
    return n;
}

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
    const auto v = random_values(1003, 1'000'000, 1);
    for (std::uint64_t d : {1ull, 2ull, 3ull, 7ull, 1000ull, 999983ull}) {
        const auto expect = std::count_if(v.begin(), v.end(), [&](auto x) { return x % d == 0; });
        CHECK(ks::scalar::count_divisible(v, d) == static_cast<std::size_t>(expect));
    }
    const std::vector<std::uint64_t> x2p1{1, 0, 1};
    CHECK(ks::scalar::poly_zero_count(x2p1, 65, 0, 65) == 4);
    CHECK(ks::scalar::poly_zero_count(x2p1, 12, 0, 12) == 0);

    std::vector<double> ref{0.1, 0.4, 0.6, 0.95};
    // gaps: (0.25-0.1, 0.1-0), (0.5-0.4, 0.4-0.25), (0.75-0.6, 0.6-0.5), (1-0.95, 0.95-0.75)
    CHECK(ks::scalar::max_cdf_gap(ref) == doctest::Approx(0.2));
    CHECK(ks::scalar::max_cdf_gap({}) == 0.0);

    const std::vector<std::uint64_t> a{0xff, ~0ull}, b{0x0f, 0};
    CHECK(ks::scalar::popcount_andnot(a, b) == 4 + 64);
}

#if defined(PDLAB_HAVE_AVX2)
TEST_CASE("avx2 variants are bit-identical to the scalar reference") {
    if (!ks::isa_available(ks::Isa::Avx2)) return;
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
        const auto v = random_values(n, ks::kExactLimit, n + 11);
        for (std::uint64_t d : {1ull, 2ull, 6ull, 97ull, 65536ull, 1'000'003ull, (1ull << 40) + 15})
            CHECK(ks::avx2::count_divisible(v, d) == ks::scalar::count_divisible(v, d));
        const auto small = random_values(n, 1000, n + 12);
        for (std::uint64_t d : {1ull, 2ull, 3ull, 10ull, 999ull})
            CHECK(ks::avx2::count_divisible(small, d) == ks::scalar::count_divisible(small, d));

        std::vector<double> ref(n);
        RandomStream rng(n, 5);
        for (auto& r : ref) r = rng.uniform();
        std::sort(ref.begin(), ref.end());
        CHECK(ks::avx2::max_cdf_gap(ref) == ks::scalar::max_cdf_gap(ref));

        const auto a = random_values(n, ~0ull, n + 1), b = random_values(n, ~0ull, n + 2);
        CHECK(ks::avx2::popcount_andnot(a, b) == ks::scalar::popcount_andnot(a, b));
    }
    const std::vector<std::vector<std::uint64_t>> polys{{1, 0, 1}, {0, 0, 0, 1}, {7, 3, 0, 2, 5}};
    for (std::uint64_t m : {1ull, 2ull, 5ull, 97ull, 1000ull, 65537ull, 1'000'003ull}) {
        for (auto c : polys) {
            for (auto& x : c) x %= m;
            CHECK(ks::avx2::poly_zero_count(c, m, 0, m) == ks::scalar::poly_zero_count(c, m, 0, m));
            if (m > 10)
                CHECK(ks::avx2::poly_zero_count(c, m, 3, m - 2) == ks::scalar::poly_zero_count(c, m, 3, m - 2));
        }
    }
    std::vector<std::uint64_t> c{12345, 67, 89000001};
    const std::uint64_t m = ks::kMaxScanModulus;
    CHECK(ks::avx2::poly_zero_count(c, m, m - 100000, m) == ks::scalar::poly_zero_count(c, m, m - 100000, m));
}
#endif

TEST_CASE("poly_zero_count matches a 128-bit Horner loop") {
    const std::vector<std::uint64_t> c{5, 0, 3, 1};
    for (std::uint64_t m : {7ull, 360ull, 1001ull, 89'999'999ull}) {
        std::vector<std::uint64_t> cm(c);
        for (auto& x : cm) x %= m;
        const std::uint64_t hi = std::min<std::uint64_t>(m, 5000);
        CHECK(ks::poly_zero_count(cm, m, 0, hi) == naive_zero_count(cm, m, 0, hi));
    }
    CHECK_THROWS_AS(ks::poly_zero_count(c, ks::kMaxScanModulus + 1, 0, 10), std::invalid_argument);
}

TEST_CASE("dispatch can be pinned to the scalar path") {
    const auto before = ks::active_isa();
    ks::set_active_isa(ks::Isa::Scalar);
    CHECK(ks::active_isa() == ks::Isa::Scalar);
    const std::vector<std::uint64_t> v{6, 12, 13};
    CHECK(ks::count_divisible(v, 6) == 2);
    ks::set_active_isa(before);
    CHECK(ks::isa_name(ks::Isa::Scalar) == "scalar");
}
