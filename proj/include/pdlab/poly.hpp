#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdlab/common.hpp"

namespace pdlab {

// Integer polynomial, coefficients constant-first. Trailing zeros are trimmed
// so degree() is exact; the zero polynomial has degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<std::int64_t> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const std::int64_t> coeffs() const { return coeffs_; }
    std::int64_t coeff(int i) const { return i <= degree() ? coeffs_[i] : 0; }
    std::int64_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

    // F(x) in 128-bit arithmetic; nullopt on overflow.
    std::optional<i128> eval(i128 x) const;

    // F(r) mod m in [0, m), any m >= 1 below 2^64.
    std::uint64_t eval_mod(std::uint64_t r, std::uint64_t m) const;

    // Coefficients reduced into [0, m), constant first.
    std::vector<std::uint64_t> reduced(std::uint64_t m) const;

    Polynomial derivative() const;

    // gcd of the coefficients (positive), 0 for the zero polynomial.
    std::uint64_t content() const;

    // Exact discriminant, (-1)^(D(D-1)/2) Res(F, F') / lead(F), computed
    // with fraction-free elimination. Degree 1 gives 1. ValidationError if
    // an intermediate leaves 128-bit range.
    i128 discriminant() const;

    std::string to_string() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<std::int64_t> coeffs_;
};

// Outcome of the irreducibility check used when a polynomial sequence is
// declared.
struct IrreducibilityVerdict {
    enum class Result { Irreducible, Reducible, Unknown };
    Result result;
    std::string reason;
};

// Degree <= 3: rational-root test, which is decisive. Degree 4..6: rational
// roots, then factor-degree patterns modulo small primes (distinct-degree
// factorization), then Kronecker's bounded trial factorization for any
// factor degree the patterns could not exclude. Degree > 6: Unknown.
IrreducibilityVerdict check_irreducible(const Polynomial& f);

// Arithmetic in F_p[X] for prime p < 2^63 (products go through 128 bits).
// Polynomials are coefficient vectors, constant first, with no trailing zeros.
namespace polymod {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a);
Poly from(const Polynomial& f, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly rem(Poly a, const Poly& m, std::uint64_t p);
Poly sub(Poly a, const Poly& b, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
Poly monic(Poly a, std::uint64_t p);
// X^e mod m.
Poly pow_x(std::uint64_t e, const Poly& m, std::uint64_t p);
// base^e mod m.
Poly pow(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p);
// Exact quotient a / b (b must divide a).
Poly div_exact(Poly a, const Poly& b, std::uint64_t p);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);  // requires gcd(a, m) = 1

// Degrees of the irreducible factors of a squarefree monic f (distinct-degree
// factorization), ascending.
std::vector<int> factor_degrees(Poly f, std::uint64_t p);

// Number of distinct roots of f in F_p: deg gcd(f, X^p - X). f must be nonzero.
int root_count(const Poly& f, std::uint64_t p);

// The distinct roots of f in F_p, ascending (equal-degree splitting with a
// fixed sequence of shifts, so the output is deterministic).
std::vector<std::uint64_t> roots(const Poly& f, std::uint64_t p);

}  // namespace polymod

}  // namespace pdlab
