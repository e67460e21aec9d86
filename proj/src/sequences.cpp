#include "pdlab/sequences.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pdlab/factor.hpp"

namespace pdlab {

namespace {

constexpr std::uint64_t kMaxMonotoneThreshold = 1'000'000;

bool even_bits(std::uint64_t n) { return (std::popcount(n) & 1) == 0; }

// 1 + max |a_i / a_D|, an upper bound on |r| for every complex root r.
double cauchy_bound(const Polynomial& f) {
    if (f.degree() < 1) return 0.0;
    const double lead = std::abs(static_cast<double>(f.leading()));
    double m = 0.0;
    for (int i = 0; i < f.degree(); ++i) m = std::max(m, std::abs(static_cast<double>(f.coeff(i))) / lead);
    return 1.0 + m;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 4) return n >= 2;
    if (n % 2 == 0 || n % 3 == 0) return false;
    const std::uint64_t r = isqrt(n);
    for (std::uint64_t d = 5; d <= r; d += 6)
        if (n % d == 0 || n % (d + 2) == 0) return false;
    return true;
}

std::uint64_t thue_morse_count(std::uint64_t x) {
    // Count n in [0, x] with even popcount, then drop n = 0.
    std::uint64_t total = 0;
    unsigned parity = 0;
    for (int i = 63; i >= 0; --i) {
        if (!((x >> i) & 1)) continue;
        // prefix of x above bit i, bit i cleared, low i bits free
        if (i >= 1)
            total += std::uint64_t{1} << (i - 1);
        else
            total += parity == 0;
        parity ^= 1;
    }
    total += parity == 0;  // x itself
    return total - 1;
}

// ---------------------------------------------------------------------------

SequenceSpec SequenceSpec::uniform() { return {}; }

SequenceSpec SequenceSpec::shifted_primes(std::int64_t a) {
    SequenceSpec s;
    s.kind = Kind::ShiftedPrimes;
    s.shift = a;
    return s;
}

SequenceSpec SequenceSpec::polynomial(std::vector<std::int64_t> coeffs) {
    Polynomial f(std::move(coeffs));
    if (f.degree() < 1) throw ValidationError("coeffs", "polynomial must have degree >= 1");
    if (f.leading() <= 0) throw ValidationError("coeffs", "leading coefficient must be positive");
    const auto verdict = check_irreducible(f);
    if (verdict.result == IrreducibilityVerdict::Result::Reducible)
        throw ValidationError("coeffs", f.to_string() + " is reducible: " + verdict.reason);
    if (verdict.result == IrreducibilityVerdict::Result::Unknown)
        throw ValidationError("coeffs", "cannot certify " + f.to_string() + " irreducible: " + verdict.reason);
    SequenceSpec s;
    s.kind = Kind::Poly;
    s.poly = std::move(f);
    return s;
}

SequenceSpec SequenceSpec::thue_morse() {
    SequenceSpec s;
    s.kind = Kind::ThueMorse;
    return s;
}

Rational SequenceSpec::level() const {
    switch (kind) {
        case Kind::ShiftedPrimes: return {1, 2};
        case Kind::Poly: return {1, static_cast<std::uint64_t>(poly->degree())};
        default: return {1, 1};
    }
}

GFunctionSpec SequenceSpec::g() const {
    switch (kind) {
        case Kind::ShiftedPrimes: return GFunctionSpec::reciprocal_totient(shift);
        case Kind::Poly: return GFunctionSpec::root_density(*poly);
        default: return GFunctionSpec::reciprocal();
    }
}

std::string SequenceSpec::name() const {
    switch (kind) {
        case Kind::Uniform: return "uniform";
        case Kind::ShiftedPrimes: return "shifted_primes(a=" + std::to_string(shift) + ")";
        case Kind::Poly: return "poly(" + poly->to_string() + ")";
        case Kind::ThueMorse: return "thue_morse";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Sequence::Sequence(SequenceSpec spec, SequenceLimits limits) : spec_(std::move(spec)), limits_(limits) {
    if (spec_.kind != SequenceSpec::Kind::Poly) return;
    if (!spec_.poly || spec_.poly->degree() < 1 || spec_.poly->leading() <= 0)
        throw ValidationError("coeffs", "polynomial spec needs degree >= 1 and a positive leading coefficient");
    const Polynomial& f = *spec_.poly;
    const double bound = std::max(cauchy_bound(f), cauchy_bound(f.derivative()));
    if (bound > static_cast<double>(kMaxMonotoneThreshold))
        throw ValidationError("coeffs", "F is not monotone before n = " + std::to_string(kMaxMonotoneThreshold));
    n0_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(bound)));
    for (std::uint64_t m = 1; m < n0_; ++m) {
        const auto v = f.eval(m);
        if (v && *v >= 1 && *v <= static_cast<i128>(UINT64_MAX)) early_values_.push_back(static_cast<std::uint64_t>(*v));
    }
    std::sort(early_values_.begin(), early_values_.end());
    early_values_.erase(std::unique(early_values_.begin(), early_values_.end()), early_values_.end());
}

bool Sequence::contains(std::uint64_t n) const {
    if (n == 0) throw ValidationError("n", "must be at least 1");
    switch (spec_.kind) {
        case SequenceSpec::Kind::Uniform:
            return true;
        case SequenceSpec::Kind::ThueMorse:
            return even_bits(n);
        case SequenceSpec::Kind::ShiftedPrimes: {
            const i128 p = static_cast<i128>(n) + spec_.shift;
            return p >= 2 && p <= static_cast<i128>(UINT64_MAX) && is_prime_u64(static_cast<std::uint64_t>(p));
        }
        case SequenceSpec::Kind::Poly: {
            if (std::binary_search(early_values_.begin(), early_values_.end(), n)) return true;
            const Polynomial& f = *spec_.poly;
            // F increases from n0 on; an overflowing F(m) is above every n.
            auto above = [&](std::uint64_t m) {
                const auto v = f.eval(m);
                return !v || *v > static_cast<i128>(n);
            };
            std::uint64_t lo = n0_, hi = n0_;
            while (!above(hi)) {
                lo = hi;
                hi = hi * 2;
            }
            // F(lo) <= n < F(hi) unless lo == hi == n0 and F(n0) > n.
            if (above(lo)) return false;
            while (hi - lo > 1) {
                const std::uint64_t mid = lo + (hi - lo) / 2;
                (above(mid) ? hi : lo) = mid;
            }
            return *f.eval(lo) == static_cast<i128>(n);
        }
    }
    return false;
}

void Sequence::for_each(std::uint64_t x, const std::function<void(std::uint64_t)>& fn) const {
    if (x == 0) throw ValidationError("x", "must be at least 1");
    switch (spec_.kind) {
        case SequenceSpec::Kind::Uniform:
            for (std::uint64_t n = 1; n <= x; ++n) fn(n);
            return;
        case SequenceSpec::Kind::ThueMorse:
            for (std::uint64_t n = 1; n <= x; ++n)
                if (even_bits(n)) fn(n);
            return;
        case SequenceSpec::Kind::ShiftedPrimes: {
            const i128 hi = static_cast<i128>(x) + spec_.shift;
            if (hi < 2) return;
            if (hi > static_cast<i128>(limits_.sieve_limit))
                throw ResourceError("sieve_limit", "shifted primes up to x = " + std::to_string(x) +
                                                       " need primes past the sieve limit " +
                                                       std::to_string(limits_.sieve_limit));
            const i128 lo = std::max<i128>(2, i128{1} + spec_.shift);
            const std::int64_t a = spec_.shift;
            for_each_prime(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi),
                           [&](std::uint64_t p) { fn(static_cast<std::uint64_t>(static_cast<i128>(p) - a)); });
            return;
        }
        case SequenceSpec::Kind::Poly: {
            const Polynomial& f = *spec_.poly;
            auto e = early_values_.begin();
            const auto e_end = std::upper_bound(early_values_.begin(), early_values_.end(), x);
            for (std::uint64_t m = n0_;; ++m) {
                const auto v = f.eval(m);
                if (!v || *v > static_cast<i128>(x)) break;
                const auto val = static_cast<std::uint64_t>(*v);
                while (e != e_end && *e < val) fn(*e++);
                if (e != e_end && *e == val) ++e;
                fn(val);
            }
            while (e != e_end) fn(*e++);
            return;
        }
    }
}

std::vector<std::uint64_t> Sequence::enumerate(std::uint64_t x) const {
    // Upper bounds on N(x) used only for the capacity check.
    std::uint64_t estimate = x;
    if (spec_.kind == SequenceSpec::Kind::ThueMorse) estimate = x / 2 + 1;
    if (spec_.kind == SequenceSpec::Kind::Poly) estimate = 0;
    if (estimate > limits_.max_members)
        throw ResourceError("max_members", "enumerating " + std::to_string(estimate) +
                                               " members exceeds the limit " + std::to_string(limits_.max_members));
    std::vector<std::uint64_t> out;
    for_each(x, [&](std::uint64_t n) {
        if (out.size() >= limits_.max_members)
            throw ResourceError("max_members", "member list exceeds " + std::to_string(limits_.max_members));
        out.push_back(n);
    });
    return out;
}

std::uint64_t Sequence::count(std::uint64_t x) const {
    if (x == 0) throw ValidationError("x", "must be at least 1");
    switch (spec_.kind) {
        case SequenceSpec::Kind::Uniform: return x;
        case SequenceSpec::Kind::ThueMorse: return thue_morse_count(x);
        default: {
            std::uint64_t n = 0;
            for_each(x, [&](std::uint64_t) { ++n; });
            return n;
        }
    }
}

std::uint64_t Sequence::count_in_class(std::uint64_t x, std::uint64_t d) const {
    if (x == 0) throw ValidationError("x", "must be at least 1");
    if (d == 0) throw ValidationError("d", "must be at least 1");
    switch (spec_.kind) {
        case SequenceSpec::Kind::Uniform:
            return x / d;
        case SequenceSpec::Kind::ThueMorse: {
            std::uint64_t n = 0;
            for (std::uint64_t m = d; m <= x; m += d) n += even_bits(m);
            return n;
        }
        default: {
            std::uint64_t n = 0;
            for_each(x, [&](std::uint64_t v) { n += v % d == 0; });
            return n;
        }
    }
}

double Sequence::regularity_ratio(std::uint64_t x, double c) const {
    if (!(c > 0.0 && c < 1.0)) throw ValidationError("c", "must lie in (0, 1)");
    const std::uint64_t total = count(x);
    if (total == 0) throw ValidationError("x", "no members up to x");
    const std::uint64_t y = floor_pow(x, c);
    const std::uint64_t small = y >= 1 ? count(y) : 0;
    return static_cast<double>(small) / static_cast<double>(total);
}

bool membership(const SequenceSpec& spec, std::uint64_t n) { return Sequence(spec).contains(n); }
std::vector<std::uint64_t> enumerate(const SequenceSpec& spec, std::uint64_t x) { return Sequence(spec).enumerate(x); }
std::uint64_t count(const SequenceSpec& spec, std::uint64_t x) { return Sequence(spec).count(x); }
std::uint64_t count_in_class(const SequenceSpec& spec, std::uint64_t x, std::uint64_t d) {
    return Sequence(spec).count_in_class(x, d);
}

}  // namespace pdlab
