#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "pdlab/common.hpp"

namespace pdlab {

// ---------------------------------------------------------------------------
// Prime generation

// Default ceiling on the bytes a PrimeTable may hold (primes plus the
// divisibility constants kept alongside them).
inline constexpr std::size_t kDefaultTableBytes = std::size_t{1} << 30;

// Calls fn(p) for every prime p in [lo, hi], ascending, using a segmented
// sieve of Eratosthenes. Memory is O(sqrt(hi) + segment).
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn);

// All primes up to `limit`, ascending. For each odd prime the table also
// keeps p^-1 mod 2^64 and floor((2^64 - 1) / p), which turn the trial
// division test `n % p == 0` into one multiply and one compare.
class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint64_t> primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    bool contains(std::uint64_t n) const;

    // Precondition: i indexes an odd prime.
    bool divides(std::size_t i, std::uint64_t n) const {
        return n * inverse_[i] <= bound_[i];
    }

    std::size_t memory_bytes() const { return primes_.size() * 3 * sizeof(std::uint64_t); }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> inverse_;
    std::vector<std::uint64_t> bound_;
};

// ResourceError("memory") when the estimated table size exceeds max_bytes.
PrimeTable build_prime_table(std::uint64_t limit, std::size_t max_bytes = kDefaultTableBytes);

// On-disk cache, format documented in docs/prime_table_format.md. Loading
// verifies magic, version, count and checksum; any mismatch is an Error.
void save_prime_table(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable load_prime_table(const std::filesystem::path& path);

// Smallest-prime-factor table over [0, limit], for bulk factorization of
// dense ranges. spf(p) == p for primes.
class SpfSieve {
public:
    // Default cap on the sieve length.
    static constexpr std::uint64_t kDefaultMaxLimit = 100'000'000;

    explicit SpfSieve(std::uint64_t limit, std::uint64_t max_limit = kDefaultMaxLimit);

    std::uint64_t limit() const { return limit_; }
    std::uint32_t spf(std::uint64_t n) const { return spf_[n] == 0 ? static_cast<std::uint32_t>(n) : spf_[n]; }
    bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == 0; }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;  // 0 marks a prime
};

// ---------------------------------------------------------------------------
// Factorizations and spectra

struct PrimePower {
    u128 prime;
    std::uint32_t exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// u = prod p^e with primes strictly ascending; u = 1 has no factors.
struct Factorization {
    u128 value = 1;
    std::vector<PrimePower> factors;
};

// Fixed-capacity factor list for hot loops (a u128 has at most 26 distinct
// prime factors).
class FactorList {
public:
    static constexpr std::size_t kCapacity = 32;

    void clear() { size_ = 0; }
    void push(u128 p, std::uint32_t e) { items_[size_++] = {p, e}; }
    std::span<const PrimePower> items() const { return {items_.data(), size_}; }
    std::size_t size() const { return size_; }

private:
    std::array<PrimePower, kCapacity> items_{};
    std::size_t size_ = 0;
};

// Trial division by the table primes up to sqrt(u); the cofactor left over is
// 1 or a prime. Requires u >= 1 and limit^2 >= u (ValidationError otherwise).
Factorization factorize(u128 u, const PrimeTable& table);
void factorize_into(u128 u, const PrimeTable& table, FactorList& out);

// Factorization by repeated smallest-prime-factor lookup, 1 <= n <= limit.
Factorization factorize(std::uint64_t n, const SpfSieve& sieve);
void factorize_into(std::uint64_t n, const SpfSieve& sieve, FactorList& out);

// Reference trial division by every integer d >= 2; slow, exact.
Factorization factorize_naive(std::uint64_t n);

// prod p^e; InternalError on overflow past 2^128.
u128 expand(std::span<const PrimePower> factors);

// P+(u), with P+(1) = 1.
u128 largest_prime(const Factorization& f);

// The descending sequence log p_j / log u over prime factors with
// multiplicity. Entries beyond size() read as 0 (the p_j = 1 convention);
// u = 1 has the single entry 1 (the convention log 1 / log 1 = 1).
struct NormalizedSpectrum {
    u128 value = 1;
    std::vector<double> entries{1.0};

    double operator[](std::size_t j) const { return j < entries.size() ? entries[j] : 0.0; }
    std::size_t size() const { return entries.size(); }
};

NormalizedSpectrum spectrum(const Factorization& f);

// Allocation-free spectrum for hot loops; Omega(u) < 128 for every u128.
class SpectrumBuffer {
public:
    static constexpr std::size_t kCapacity = 128;

    double operator[](std::size_t j) const { return j < size_ ? entries_[j] : 0.0; }
    std::size_t size() const { return size_; }
    std::span<const double> entries() const { return {entries_.data(), size_}; }
    u128 value() const { return value_; }

    // Fills from a factor list of `value` (primes ascending).
    void assign(u128 value, std::span<const PrimePower> factors);

private:
    std::array<double, kCapacity> entries_{};
    std::size_t size_ = 0;
    u128 value_ = 1;
};

}  // namespace pdlab
