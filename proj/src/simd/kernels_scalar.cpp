#include <algorithm>
#include <bit>
#include <cmath>

#include "pdlab/simd/kernels.hpp"

namespace pdlab::simd::scalar {

std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d) {
    std::size_t n = 0;
    for (std::uint64_t v : values) n += (v % d == 0);
    return n;
}

// Horner in doubles: every intermediate is an integer below 2^53, so the
// arithmetic is exact and matches the vector variant operation for operation.
std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end) {
    if (coeffs.empty()) return static_cast<std::size_t>(end - begin);
    const double md = static_cast<double>(m);
    std::size_t zeros = 0;
    for (std::uint64_t r = begin; r < end; ++r) {
        const double rd = static_cast<double>(r);
        double acc = static_cast<double>(coeffs.back());
        for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
            acc = acc * rd + static_cast<double>(coeffs[i]);
            const double q = std::floor(acc / md);
            acc -= q * md;
            if (acc < 0) acc += md;
            if (acc >= md) acc -= md;
        }
        zeros += (acc == 0.0);
    }
    return zeros;
}

double max_cdf_gap(std::span<const double> ref) {
    const double n = static_cast<double>(ref.size());
    double best = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        best = std::max(best, std::max(hi - ref[i], ref[i] - lo));
    }
    return best;
}

std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::popcount(a[i] & ~b[i]);
    return total;
}

}  // namespace pdlab::simd::scalar
