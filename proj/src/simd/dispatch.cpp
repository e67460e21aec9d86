#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pdlab/simd/kernels.hpp"

namespace pdlab::simd {

namespace {

Isa detect() {
    if (const char* env = std::getenv("PDLAB_SIMD"); env != nullptr && std::string(env) == "scalar")
        return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(PDLAB_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa))
        throw std::invalid_argument("ISA not available: " + std::string(isa_name(isa)));
    current().store(isa, std::memory_order_relaxed);
}

std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d) {
#if defined(PDLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2 && d < kExactLimit) return avx2::count_divisible(values, d);
#endif
    return scalar::count_divisible(values, d);
}

std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end) {
    if (m == 0 || m > kMaxScanModulus)
        throw std::invalid_argument("poly_zero_count: modulus out of range");
#if defined(PDLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::poly_zero_count(coeffs, m, begin, end);
#endif
    return scalar::poly_zero_count(coeffs, m, begin, end);
}

double max_cdf_gap(std::span<const double> ref) {
#if defined(PDLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::max_cdf_gap(ref);
#endif
    return scalar::max_cdf_gap(ref);
}

std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("popcount_andnot: length mismatch");
#if defined(PDLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::popcount_andnot(a, b);
#endif
    return scalar::popcount_andnot(a, b);
}

}  // namespace pdlab::simd
