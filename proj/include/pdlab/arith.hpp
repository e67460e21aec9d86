#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdlab/poly.hpp"

namespace pdlab {

std::uint64_t euler_phi(std::uint64_t d);
unsigned big_omega(std::uint64_t d);
// Number of ordered triples (d1, d2, d3) with d1 d2 d3 = d.
std::uint64_t tau3(std::uint64_t d);

// ---------------------------------------------------------------------------
// Roots of an integer polynomial modulo d

enum class RootMethod {
    Auto,    // scan when p | disc F, p | content F or p^k <= small_scan; Hensel otherwise
    Scan,    // exhaustive residue scan mod p^k
    Hensel,  // lift the roots mod p; requires p not dividing disc F or content F
};

struct RootCountOptions {
    std::uint64_t small_scan = 1'000'000;   // Auto scans moduli up to this size
    std::uint64_t scan_budget = 10'000'000; // hard cap on any residue scan
};

// h(d) for one polynomial, with the discriminant and content computed once.
class RootCounter {
public:
    explicit RootCounter(Polynomial f, RootCountOptions opts = {});

    const Polynomial& poly() const { return f_; }
    i128 discriminant() const { return disc_; }

    // p | disc F or p | content F: Hensel's lemma does not apply.
    bool exceptional(std::uint64_t p) const;

    // Distinct primes dividing disc F (found by trial division up to 10^6;
    // a larger cofactor is reported as is).
    const std::vector<std::uint64_t>& discriminant_primes() const { return disc_primes_; }

    // h(p^k). Throws ResourceError("scan_budget") when a required scan is
    // too large and ValidationError when Hensel is forced at an exceptional p.
    std::uint64_t at_prime_power(std::uint64_t p, unsigned k, RootMethod method = RootMethod::Auto) const;

    // h(p), fast: deg gcd(F, X^p - X) for unexceptional p, scan otherwise.
    std::uint64_t at_prime(std::uint64_t p) const;

    // h(d) = prod over p^k || d of h(p^k).
    std::uint64_t at(std::uint64_t d, RootMethod method = RootMethod::Auto) const;

    // The C of the bound h(d) <= C^Omega(d): max(D, primes dividing disc F).
    std::uint64_t bound_constant() const;

    // Number of r in [0, m) with F(r) = 0 mod m, by exhaustive scan.
    std::uint64_t scan(std::uint64_t m) const;

    // The roots mod p^k obtained by Hensel lifting every root mod p.
    std::vector<std::uint64_t> hensel_roots(std::uint64_t p, unsigned k) const;

private:
    Polynomial f_;
    Polynomial df_;
    RootCountOptions opts_;
    i128 disc_;
    std::uint64_t content_;
    std::vector<std::uint64_t> disc_primes_;
};

std::uint64_t poly_root_count_pk(const Polynomial& f, std::uint64_t p, unsigned k,
                                 RootMethod method = RootMethod::Auto);
std::uint64_t poly_root_count(const Polynomial& f, std::uint64_t d,
                              RootMethod method = RootMethod::Auto);

// ---------------------------------------------------------------------------
// The multiplicative density g(d) of a sequence

struct Rational {
    std::uint64_t num;
    std::uint64_t den;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
    }
};

struct GFunctionSpec {
    enum class Kind {
        Reciprocal,          // g(d) = 1/d
        ReciprocalTotient,   // g(d) = 1/phi(d) when gcd(d, shift) = 1, else 0
        RootDensity,         // g(d) = h(d)/d for a polynomial F
    };

    Kind kind = Kind::Reciprocal;
    std::int64_t shift = 1;         // ReciprocalTotient only
    std::optional<Polynomial> poly; // RootDensity only

    static GFunctionSpec reciprocal() { return {}; }
    static GFunctionSpec reciprocal_totient(std::int64_t shift = 1) {
        return {Kind::ReciprocalTotient, shift, std::nullopt};
    }
    static GFunctionSpec root_density(Polynomial f) { return {Kind::RootDensity, 1, std::move(f)}; }
};

// Evaluates a GFunctionSpec, caching the polynomial machinery.
class GFunction {
public:
    explicit GFunction(GFunctionSpec spec, RootCountOptions opts = {});

    const GFunctionSpec& spec() const { return spec_; }

    // g(d) as a reduced fraction. d >= 1.
    Rational operator()(std::uint64_t d) const;

    // g at a prime, on the fast path (no factorization of p).
    double at_prime(std::uint64_t p) const;

    // g(p^k) as a double.
    double at_prime_power(std::uint64_t p, unsigned k) const;

    // h(d) = d g(d) when the spec is RootDensity.
    const RootCounter* root_counter() const { return roots_ ? &*roots_ : nullptr; }

private:
    GFunctionSpec spec_;
    std::optional<RootCounter> roots_;
};

Rational g_eval(const GFunctionSpec& g, std::uint64_t d);

// sum_{p <= x} g(p) log p - log x. x >= 2.
double mertens_deviation(const GFunction& g, std::uint64_t x);

struct PartialSums {
    double sum_g = 0.0;                 // sum_{n <= x} g(n)
    std::optional<double> sum_h;        // sum_{n <= x} h(n), RootDensity only
};

// Exact-order summation over n <= x (x <= 10^7 by default).
PartialSums partial_sums_gh(const GFunction& g, std::uint64_t x,
                            std::uint64_t max_x = 10'000'000);

// Smallest C >= 1 with h(d) <= C^Omega(d) for 2 <= d <= limit, i.e.
// max h(d)^(1/Omega(d)). Also returns the d attaining it.
struct EmpiricalConstant {
    double c;
    std::uint64_t argmax;
};
EmpiricalConstant empirical_bound_constant(const RootCounter& roots, std::uint64_t limit);

}  // namespace pdlab
