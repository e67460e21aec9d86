#include "pdlab/arith.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "pdlab/factor.hpp"
#include "pdlab/simd/kernels.hpp"

namespace pdlab {

namespace {

std::uint64_t checked_power(std::uint64_t p, unsigned k) {
    u128 m = 1;
    for (unsigned i = 0; i < k; ++i) {
        m *= p;
        if (m > UINT64_MAX) throw ValidationError("k", "p^k exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(m);
}

std::uint64_t abs_mod(i128 v, std::uint64_t p) {
    const i128 r = v % static_cast<i128>(p);
    return static_cast<std::uint64_t>(r < 0 ? -r : r);
}

}  // namespace

std::uint64_t euler_phi(std::uint64_t d) {
    if (d == 0) throw ValidationError("d", "must be at least 1");
    std::uint64_t phi = d;
    for (const auto& [p, e] : factorize_naive(d).factors) {
        const auto q = static_cast<std::uint64_t>(p);
        phi = phi / q * (q - 1);
    }
    return phi;
}

unsigned big_omega(std::uint64_t d) {
    if (d == 0) throw ValidationError("d", "must be at least 1");
    unsigned n = 0;
    for (const auto& pe : factorize_naive(d).factors) n += pe.exponent;
    return n;
}

std::uint64_t tau3(std::uint64_t d) {
    if (d == 0) throw ValidationError("d", "must be at least 1");
    std::uint64_t t = 1;
    for (const auto& pe : factorize_naive(d).factors) {
        const std::uint64_t e = pe.exponent;
        t *= (e + 2) * (e + 1) / 2;
    }
    return t;
}

// ---------------------------------------------------------------------------

RootCounter::RootCounter(Polynomial f, RootCountOptions opts)
    : f_(std::move(f)), df_(f_.derivative()), opts_(opts) {
    if (f_.degree() < 1) throw ValidationError("coeffs", "root counting needs degree >= 1");
    disc_ = f_.discriminant();
    content_ = f_.content();
    u128 rest = static_cast<u128>(disc_ < 0 ? -disc_ : disc_);
    for (std::uint64_t q = 2; rest > 1 && q <= 1'000'000; ++q) {
        if (rest % q != 0) continue;
        disc_primes_.push_back(q);
        while (rest % q == 0) rest /= q;
    }
    if (rest > 1) disc_primes_.push_back(rest > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(rest));
}

bool RootCounter::exceptional(std::uint64_t p) const {
    return abs_mod(disc_, p) == 0 || content_ % p == 0;
}

std::uint64_t RootCounter::scan(std::uint64_t m) const {
    if (m == 0) throw ValidationError("d", "modulus must be at least 1");
    if (m > opts_.scan_budget || m > simd::kMaxScanModulus)
        throw ResourceError("scan_budget", "residue scan mod " + std::to_string(m) +
                                               " exceeds the budget " + std::to_string(opts_.scan_budget));
    const auto coeffs = f_.reduced(m);
    return simd::poly_zero_count(coeffs, m, 0, m);
}

std::vector<std::uint64_t> RootCounter::hensel_roots(std::uint64_t p, unsigned k) const {
    if (exceptional(p))
        throw ValidationError("p", "Hensel lifting needs p not dividing disc F or content F (p = " +
                                       std::to_string(p) + ")");
    const std::uint64_t target = checked_power(p, k);
    auto roots = polymod::roots(polymod::from(f_, p), p);
    for (auto& r : roots) {
        std::uint64_t mod = p;
        const std::uint64_t deriv = df_.eval_mod(r, p);
        PDLAB_ASSERT(deriv != 0, "ramified root mod " + std::to_string(p) + " although p does not divide disc F");
        const std::uint64_t inv = polymod::invmod(deriv, p);
        for (unsigned j = 1; j < k; ++j) {
            const std::uint64_t next = mod * p;
            // F(r + t mod) = F(r) + t mod F'(r)  (mod next)
            const std::uint64_t v = f_.eval_mod(r, next);
            PDLAB_ASSERT(v % mod == 0, "lift lost the root");
            const std::uint64_t q = (v / mod) % p;
            const std::uint64_t t = (p - polymod::mulmod(q, inv, p)) % p;
            r = r + t * mod;
            mod = next;
        }
        PDLAB_ASSERT(f_.eval_mod(r, target) == 0, "lifted value is not a root");
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::uint64_t RootCounter::at_prime_power(std::uint64_t p, unsigned k, RootMethod method) const {
    if (k == 0) return 1;
    const std::uint64_t m = checked_power(p, k);
    switch (method) {
        case RootMethod::Scan:
            return scan(m);
        case RootMethod::Hensel:
            return hensel_roots(p, k).size();
        case RootMethod::Auto:
            if (exceptional(p) || m <= opts_.small_scan) return scan(m);
            return hensel_roots(p, k).size();
    }
    return 0;
}

std::uint64_t RootCounter::at_prime(std::uint64_t p) const {
    if (exceptional(p)) return at_prime_power(p, 1, RootMethod::Auto);
    return static_cast<std::uint64_t>(polymod::root_count(polymod::from(f_, p), p));
}

std::uint64_t RootCounter::at(std::uint64_t d, RootMethod method) const {
    if (d == 0) throw ValidationError("d", "must be at least 1");
    std::uint64_t h = 1;
    for (const auto& pe : factorize_naive(d).factors) {
        h *= at_prime_power(static_cast<std::uint64_t>(pe.prime), pe.exponent, method);
        if (h == 0) break;
    }
    return h;
}

std::uint64_t RootCounter::bound_constant() const {
    std::uint64_t c = static_cast<std::uint64_t>(f_.degree());
    for (std::uint64_t p : disc_primes_) c = std::max(c, p);
    return c;
}

std::uint64_t poly_root_count_pk(const Polynomial& f, std::uint64_t p, unsigned k, RootMethod method) {
    return RootCounter(f).at_prime_power(p, k, method);
}

std::uint64_t poly_root_count(const Polynomial& f, std::uint64_t d, RootMethod method) {
    return RootCounter(f).at(d, method);
}

// ---------------------------------------------------------------------------

GFunction::GFunction(GFunctionSpec spec, RootCountOptions opts) : spec_(std::move(spec)) {
    if (spec_.kind == GFunctionSpec::Kind::RootDensity) {
        if (!spec_.poly) throw ValidationError("g", "RootDensity needs a polynomial");
        roots_.emplace(*spec_.poly, opts);
    }
}

Rational GFunction::operator()(std::uint64_t d) const {
    if (d == 0) throw ValidationError("d", "must be at least 1");
    switch (spec_.kind) {
        case GFunctionSpec::Kind::Reciprocal:
            return {1, d};
        case GFunctionSpec::Kind::ReciprocalTotient: {
            const auto a = static_cast<std::uint64_t>(spec_.shift < 0 ? -static_cast<i128>(spec_.shift) : spec_.shift);
            if (std::gcd(d, a) != 1) return {0, 1};
            return {1, euler_phi(d)};
        }
        case GFunctionSpec::Kind::RootDensity: {
            const std::uint64_t h = roots_->at(d);
            const std::uint64_t g = std::gcd(h, d);
            return h == 0 ? Rational{0, 1} : Rational{h / g, d / g};
        }
    }
    return {0, 1};
}

double GFunction::at_prime(std::uint64_t p) const {
    switch (spec_.kind) {
        case GFunctionSpec::Kind::Reciprocal:
            return 1.0 / static_cast<double>(p);
        case GFunctionSpec::Kind::ReciprocalTotient:
            if (abs_mod(spec_.shift, p) == 0) return 0.0;
            return 1.0 / static_cast<double>(p - 1);
        case GFunctionSpec::Kind::RootDensity:
            return static_cast<double>(roots_->at_prime(p)) / static_cast<double>(p);
    }
    return 0.0;
}

double GFunction::at_prime_power(std::uint64_t p, unsigned k) const {
    const double pk = std::pow(static_cast<double>(p), static_cast<double>(k));
    switch (spec_.kind) {
        case GFunctionSpec::Kind::Reciprocal:
            return 1.0 / pk;
        case GFunctionSpec::Kind::ReciprocalTotient:
            if (abs_mod(spec_.shift, p) == 0) return 0.0;
            return 1.0 / (pk / static_cast<double>(p) * static_cast<double>(p - 1));
        case GFunctionSpec::Kind::RootDensity: {
            // Off the exceptional primes every root mod p lifts uniquely.
            const std::uint64_t h =
                roots_->exceptional(p) ? roots_->at_prime_power(p, k) : roots_->at_prime(p);
            return static_cast<double>(h) / pk;
        }
    }
    return 0.0;
}

Rational g_eval(const GFunctionSpec& g, std::uint64_t d) { return GFunction(g)(d); }

double mertens_deviation(const GFunction& g, std::uint64_t x) {
    if (x < 2) throw ValidationError("x", "mertens_deviation needs x >= 2");
    double sum = 0.0;
    for_each_prime(2, x, [&](std::uint64_t p) {
        sum += g.at_prime(p) * std::log(static_cast<double>(p));
    });
    return sum - std::log(static_cast<double>(x));
}

PartialSums partial_sums_gh(const GFunction& g, std::uint64_t x, std::uint64_t max_x) {
    if (x < 1) throw ValidationError("x", "must be at least 1");
    if (x > max_x) throw ResourceError("max_x", "partial sums are capped at x = " + std::to_string(max_x));
    const SpfSieve sieve(x);
    const bool roots = g.spec().kind == GFunctionSpec::Kind::RootDensity;
    const RootCounter* rc = g.root_counter();

    // h(p^k) caches: unexceptional primes need only h(p); the exceptional
    // ones are few and small.
    constexpr std::uint8_t kUnknown = 0xff;
    std::vector<std::uint8_t> h_prime;
    std::map<std::pair<std::uint64_t, unsigned>, std::uint64_t> h_exceptional;
    if (roots) h_prime.assign(x + 1, kUnknown);
    auto h_power = [&](std::uint64_t p, unsigned e) -> std::uint64_t {
        if (rc->exceptional(p)) {
            auto [it, fresh] = h_exceptional.try_emplace({p, e}, 0);
            if (fresh) it->second = rc->at_prime_power(p, e);
            return it->second;
        }
        if (h_prime[p] == kUnknown) h_prime[p] = static_cast<std::uint8_t>(rc->at_prime(p));
        return h_prime[p];
    };

    // Neumaier-compensated sum in increasing n.
    double sum = 0.0, comp = 0.0;
    std::uint64_t sum_h = 0;
    FactorList fl;
    for (std::uint64_t n = 1; n <= x; ++n) {
        factorize_into(n, sieve, fl);
        double term = 1.0;
        std::uint64_t h = 1;
        for (const auto& [p128, e] : fl.items()) {
            const auto p = static_cast<std::uint64_t>(p128);
            if (roots) {
                h *= h_power(p, e);
                if (h == 0) break;
            } else {
                term *= g.at_prime_power(p, e);
            }
        }
        if (roots) {
            sum_h += h;
            term = static_cast<double>(h) / static_cast<double>(n);
        }
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    PartialSums out;
    out.sum_g = sum + comp;
    if (roots) out.sum_h = static_cast<double>(sum_h);
    return out;
}

EmpiricalConstant empirical_bound_constant(const RootCounter& roots, std::uint64_t limit) {
    EmpiricalConstant best{1.0, 1};
    if (limit < 2) return best;
    const SpfSieve sieve(limit);
    std::map<std::pair<std::uint64_t, unsigned>, std::uint64_t> cache;
    FactorList fl;
    for (std::uint64_t d = 2; d <= limit; ++d) {
        factorize_into(d, sieve, fl);
        std::uint64_t h = 1;
        unsigned omega = 0;
        for (const auto& [p128, e] : fl.items()) {
            const auto p = static_cast<std::uint64_t>(p128);
            omega += e;
            auto [it, fresh] = cache.try_emplace({p, e}, 0);
            if (fresh)
                it->second = roots.exceptional(p) ? roots.at_prime_power(p, e) : roots.at_prime(p);
            h *= it->second;
        }
        if (h <= 1) continue;
        const double c = std::pow(static_cast<double>(h), 1.0 / omega);
        if (c > best.c) best = {c, d};
    }
    return best;
}

}  // namespace pdlab
