// Compiled with -mavx2; only reached through the runtime dispatcher.
#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "pdlab/simd/kernels.hpp"

namespace pdlab::simd::avx2 {

namespace {

// Exact u64 -> double for values below 2^52.
inline __m256d to_pd(__m256i v) {
    const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

}  // namespace

std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d) {
    const __m256d dd = _mm256_set1_pd(static_cast<double>(d));
    const __m256d zero = _mm256_setzero_pd();
    std::size_t n = 0;
    std::size_t i = 0;
    for (; i + 4 <= values.size(); i += 4) {
        const __m256i raw =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
        const __m256d v = to_pd(raw);
        const __m256d q = _mm256_floor_pd(_mm256_div_pd(v, dd));
        const __m256d r = _mm256_sub_pd(v, _mm256_mul_pd(q, dd));
        n += static_cast<std::size_t>(
            std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(r, zero, _CMP_EQ_OQ)))));
    }
    for (; i < values.size(); ++i) n += (values[i] % d == 0);
    return n;
}

std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end) {
    if (coeffs.empty()) return static_cast<std::size_t>(end - begin);
    const __m256d md = _mm256_set1_pd(static_cast<double>(m));
    const __m256d zero = _mm256_setzero_pd();
    const __m256d four = _mm256_set1_pd(4.0);
    const std::size_t top = coeffs.size() - 1;
    const __m256d lead = _mm256_set1_pd(static_cast<double>(coeffs[top]));

    std::size_t zeros = 0;
    std::uint64_t r = begin;
    if (end - begin >= 4) {
        const double base = static_cast<double>(r);
        __m256d rv = _mm256_setr_pd(base, base + 1, base + 2, base + 3);
        for (; r + 4 <= end; r += 4) {
            __m256d acc = lead;
            for (std::size_t i = top; i-- > 0;) {
                acc = _mm256_add_pd(_mm256_mul_pd(acc, rv),
                                    _mm256_set1_pd(static_cast<double>(coeffs[i])));
                const __m256d q = _mm256_floor_pd(_mm256_div_pd(acc, md));
                acc = _mm256_sub_pd(acc, _mm256_mul_pd(q, md));
                acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_cmp_pd(acc, zero, _CMP_LT_OQ), md));
                acc = _mm256_sub_pd(acc, _mm256_and_pd(_mm256_cmp_pd(acc, md, _CMP_GE_OQ), md));
            }
            zeros += static_cast<std::size_t>(std::popcount(
                static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(acc, zero, _CMP_EQ_OQ)))));
            rv = _mm256_add_pd(rv, four);
        }
    }
    if (r < end) zeros += scalar::poly_zero_count(coeffs, m, r, end);
    return zeros;
}

double max_cdf_gap(std::span<const double> ref) {
    const double n = static_cast<double>(ref.size());
    const __m256d nv = _mm256_set1_pd(n);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d best = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0, 1, 2, 3);
    std::size_t i = 0;
    for (; i + 4 <= ref.size(); i += 4) {
        const __m256d f = _mm256_loadu_pd(ref.data() + i);
        const __m256d lo = _mm256_div_pd(idx, nv);
        const __m256d hi = _mm256_div_pd(_mm256_add_pd(idx, one), nv);
        best = _mm256_max_pd(best, _mm256_max_pd(_mm256_sub_pd(hi, f), _mm256_sub_pd(f, lo)));
        idx = _mm256_add_pd(idx, four);
    }
    double out = hmax(best);
    for (; i < ref.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        out = std::max(out, std::max(hi - ref[i], ref[i] - lo));
    }
    return out;
}

// Nibble-table popcount (Mula, Kurz, Lemire).
std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b) {
    const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                           0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= a.size(); i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        const __m256i v = _mm256_andnot_si256(vb, va);
        const __m256i lo = _mm256_shuffle_epi8(table, _mm256_and_si256(v, low_mask));
        const __m256i hi =
            _mm256_shuffle_epi8(table, _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_add_epi8(lo, hi),
                                                    _mm256_setzero_si256()));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < a.size(); ++i) total += std::popcount(a[i] & ~b[i]);
    return total;
}

}  // namespace pdlab::simd::avx2
