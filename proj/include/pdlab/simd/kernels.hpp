#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// pdlab::simd::scalar and, where the target supports it, an AVX2 variant in
// pdlab::simd::avx2. The unqualified entry points dispatch at runtime.
// Variants return bit-identical results; tests/unit/test_simd.cpp checks it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pdlab::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// The ISA picked at first use: the best available one unless the
// environment variable PDLAB_SIMD=scalar forces the reference path.
Isa active_isa();
// Test hook; throws std::invalid_argument if `isa` is not available.
void set_active_isa(Isa isa);

// Values must be below 2^52 (exact in a double).
inline constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 52;

// Number of v in `values` with v % d == 0. Requires d >= 1 and every value
// below kExactLimit.
std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d);

// Largest modulus accepted by poly_zero_count: m^2 + m must stay below 2^53.
inline constexpr std::uint64_t kMaxScanModulus = 90'000'000;

// Number of residues r in [begin, end) with F(r) == 0 (mod m), where
// `coeffs` holds F's coefficients reduced into [0, m), constant term first.
std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end);

// Kolmogorov-Smirnov gap for a sorted sample of size n with reference CDF
// values ref[i] = F(x_(i)):  max_i max((i+1)/n - ref[i], ref[i] - i/n).
// Returns 0 for an empty span.
double max_cdf_gap(std::span<const double> ref);

// popcount(a[i] & ~b[i]) summed over i. Spans must have equal length.
std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b);

namespace scalar {
std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d);
std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end);
double max_cdf_gap(std::span<const double> ref);
std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b);
}  // namespace scalar

#if defined(PDLAB_HAVE_AVX2)
namespace avx2 {
std::size_t count_divisible(std::span<const std::uint64_t> values, std::uint64_t d);
std::size_t poly_zero_count(std::span<const std::uint64_t> coeffs, std::uint64_t m,
                            std::uint64_t begin, std::uint64_t end);
double max_cdf_gap(std::span<const double> ref);
std::uint64_t popcount_andnot(std::span<const std::uint64_t> a,
                              std::span<const std::uint64_t> b);
}  // namespace avx2
#endif

}  // namespace pdlab::simd
