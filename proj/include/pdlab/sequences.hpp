#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdlab/arith.hpp"
#include "pdlab/poly.hpp"

namespace pdlab {

// Which 0/1 sequence (a_n) is under study.
struct SequenceSpec {
    enum class Kind { Uniform, ShiftedPrimes, Poly, ThueMorse };

    Kind kind = Kind::Uniform;
    std::int64_t shift = 0;          // ShiftedPrimes: members are p - shift
    std::optional<Polynomial> poly;  // Poly: members are F(n), n >= 1

    static SequenceSpec uniform();
    static SequenceSpec shifted_primes(std::int64_t a);
    // ValidationError("coeffs") unless F is irreducible of degree 1..6 with a
    // positive leading coefficient.
    static SequenceSpec polynomial(std::vector<std::int64_t> coeffs_constant_first);
    static SequenceSpec thue_morse();

    // The level of distribution: 1, 1/2, 1/D, 1.
    Rational level() const;

    // The density g(d). Thue-Morse uses 1/d, an editorial choice based on
    // equidistribution in residue classes.
    GFunctionSpec g() const;

    std::string name() const;

    friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

struct SequenceLimits {
    // Largest prime the shifted-prime enumeration will sieve to.
    std::uint64_t sieve_limit = 10'000'000'000ull;
    // Largest member list enumerate() will materialize.
    std::uint64_t max_members = 500'000'000ull;
};

// A SequenceSpec with the per-spec data membership queries need (for
// polynomials: the monotonicity threshold n0 and the values below it).
class Sequence {
public:
    explicit Sequence(SequenceSpec spec, SequenceLimits limits = {});

    const SequenceSpec& spec() const { return spec_; }
    const SequenceLimits& limits() const { return limits_; }

    // a_n for n >= 1.
    bool contains(std::uint64_t n) const;

    // Calls fn(n) for each member n <= x, ascending. Shifted primes come from
    // a segmented sieve and polynomial values from evaluating F; nothing
    // tests every n. ResourceError("sieve_limit") if a sieve would pass the
    // configured limit.
    void for_each(std::uint64_t x, const std::function<void(std::uint64_t)>& fn) const;

    // Members <= x as a list. ResourceError("max_members") if the list would
    // be too long.
    std::vector<std::uint64_t> enumerate(std::uint64_t x) const;

    // N(x) and N_d(x).
    std::uint64_t count(std::uint64_t x) const;
    std::uint64_t count_in_class(std::uint64_t x, std::uint64_t d) const;

    // N(floor(x^c)) / N(x), the regularity diagnostic.
    double regularity_ratio(std::uint64_t x, double c) const;

    // Polynomial specs: F is positive and strictly increasing from n0 on.
    std::uint64_t monotone_from() const { return n0_; }

private:
    SequenceSpec spec_;
    SequenceLimits limits_;
    std::uint64_t n0_ = 1;
    std::vector<std::uint64_t> early_values_;  // distinct positive F(n), 1 <= n < n0, ascending
};

// Deterministic primality by trial division (n < 2^64).
bool is_prime_u64(std::uint64_t n);

// Number of n in [1, x] with an even number of 1 bits.
std::uint64_t thue_morse_count(std::uint64_t x);

// Convenience wrappers over a temporary Sequence.
bool membership(const SequenceSpec& spec, std::uint64_t n);
std::vector<std::uint64_t> enumerate(const SequenceSpec& spec, std::uint64_t x);
std::uint64_t count(const SequenceSpec& spec, std::uint64_t x);
std::uint64_t count_in_class(const SequenceSpec& spec, std::uint64_t x, std::uint64_t d);

}  // namespace pdlab
