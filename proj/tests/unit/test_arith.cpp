#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pdlab/arith.hpp"
#include "pdlab/factor.hpp"

using namespace pdlab;

namespace {

std::uint64_t scan(const Polynomial& f, std::uint64_t m) {
    std::uint64_t n = 0;
    for (std::uint64_t r = 0; r < m; ++r) n += f.eval_mod(r, m) == 0;
    return n;
}

std::uint64_t tau3_brute(std::uint64_t d) {
    std::uint64_t n = 0;
    for (std::uint64_t a = 1; a <= d; ++a)
        if (d % a == 0)
            for (std::uint64_t b = 1; b <= d / a; ++b) n += (d / a) % b == 0;
    return n;
}

const Polynomial X2p1({1, 0, 1});
const Polynomial X3m2({-2, 0, 0, 1});
const Polynomial X2mXm1({-1, -1, 1});

}  // namespace

TEST_CASE("phi, Omega and tau3") {
    CHECK(euler_phi(12) == 4);
    CHECK(big_omega(12) == 3);
    CHECK(tau3(12) == tau3_brute(12));
    CHECK(tau3(12) == 18);
    CHECK(euler_phi(1) == 1);
    CHECK(big_omega(1) == 0);
    CHECK(tau3(1) == 1);
    CHECK(big_omega(8) == 3);
    for (std::uint64_t d = 1; d <= 300; ++d) {
        std::uint64_t phi = 0;
        for (std::uint64_t k = 1; k <= d; ++k) phi += std::gcd(k, d) == 1;
        REQUIRE(euler_phi(d) == phi);
        REQUIRE(tau3(d) == tau3_brute(d));
    }
    CHECK_THROWS_AS(euler_phi(0), ValidationError);
}

TEST_CASE("root counts modulo prime powers") {
    CHECK(poly_root_count_pk(X2p1, 5, 1) == 2);
    CHECK(poly_root_count_pk(X2p1, 3, 1) == 0);
    CHECK(poly_root_count_pk(X2p1, 2, 2) == 0);
    CHECK(poly_root_count(X2p1, 65) == 4);
    CHECK(poly_root_count(X2p1, 65) == scan(X2p1, 65));
    CHECK(poly_root_count(X2p1, 1) == 1);
    CHECK(poly_root_count(X2p1, 12) == 0);
    CHECK(poly_root_count(X2p1, 12) == scan(X2p1, 12));
}

TEST_CASE("every method agrees with a direct scan") {
    for (const auto& f : {X2p1, X3m2, X2mXm1}) {
        const RootCounter rc(f);
        for (std::uint64_t d = 1; d <= 3000; ++d) REQUIRE(rc.at(d) == scan(f, d));
        for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 29ull, 31ull, 101ull}) {
            if (rc.exceptional(p)) continue;
            std::uint64_t pk = 1;
            for (unsigned k = 1; k <= 4 && (pk *= p) <= 1'000'000; ++k) {
                const auto want = rc.at_prime_power(p, k, RootMethod::Scan);
                CHECK(rc.at_prime_power(p, k, RootMethod::Hensel) == want);
                const auto roots = rc.hensel_roots(p, k);
                for (auto r : roots) CHECK(f.eval_mod(r, pk) == 0);
            }
        }
    }
}

TEST_CASE("hensel bound at unexceptional primes") {
    for (const auto& f : {X2p1, X3m2, X2mXm1, Polynomial({1, 0, 0, 0, 1})}) {
        const RootCounter rc(f);
        for_each_prime(2, 1000, [&](std::uint64_t p) {
            if (rc.exceptional(p)) return;
            for (unsigned k = 1; k <= 5; ++k) {
                const auto h = rc.at_prime_power(p, k);
                REQUIRE(h <= static_cast<std::uint64_t>(f.degree()));
                REQUIRE(h == rc.at_prime(p));
            }
        });
    }
}

TEST_CASE("exceptional primes route to the scan") {
    const RootCounter rc(X2p1);
    CHECK(rc.exceptional(2));
    CHECK(!rc.exceptional(5));
    CHECK(rc.discriminant_primes() == std::vector<std::uint64_t>{2});
    CHECK(rc.bound_constant() == 2);
    CHECK_THROWS_AS(rc.at_prime_power(2, 3, RootMethod::Hensel), ValidationError);
    CHECK(rc.at_prime_power(2, 1) == 1);
    CHECK(rc.at_prime_power(2, 5) == 0);

    const RootCounter cubic(X3m2);  // disc -108 = -2^2 3^3
    CHECK(cubic.discriminant_primes() == std::vector<std::uint64_t>{2, 3});
    CHECK(cubic.bound_constant() == 3);
    // X^3 - 2 mod 3^k: r = 2 is a root mod 3 with F'(2) = 12 = 0 mod 3
    for (unsigned k = 1; k <= 6; ++k) CHECK(cubic.at_prime_power(3, k) == scan(X3m2, static_cast<std::uint64_t>(std::pow(3, k))));

    RootCountOptions tight;
    tight.small_scan = 10;
    tight.scan_budget = 100;
    const RootCounter limited(X2p1, tight);
    CHECK_THROWS_AS(limited.at_prime_power(2, 7), ResourceError);
    CHECK(limited.at_prime_power(1'000'003, 1) == 0);  // Hensel path, no scan
    CHECK(limited.at_prime_power(1'000'033, 2) == 2);
}

TEST_CASE("multiplicativity on coprime pairs") {
    // A root mod mn reduces to a root mod m, so scanning mod mn only needs
    // the n lifts r + jm of each root r mod m; the count is still exhaustive.
    for (const auto& f : {X2p1, X3m2, X2mXm1}) {
        std::vector<std::vector<std::uint64_t>> roots(301);
        for (std::uint64_t m = 1; m <= 300; ++m)
            for (std::uint64_t r = 0; r < m; ++r)
                if (f.eval_mod(r, m) == 0) roots[m].push_back(r);
        for (std::uint64_t m = 1; m <= 300; ++m)
            for (std::uint64_t n = 1; n <= 300; ++n) {
                if (std::gcd(m, n) != 1) continue;
                std::uint64_t count = 0;
                for (auto r : roots[m])
                    for (std::uint64_t j = 0; j < n; ++j) count += f.eval_mod(r + j * m, m * n) == 0;
                REQUIRE(count == roots[m].size() * roots[n].size());
            }
    }
}

TEST_CASE("g values") {
    CHECK(g_eval(GFunctionSpec::reciprocal_totient(), 10) == Rational{1, 4});
    CHECK(g_eval(GFunctionSpec::reciprocal(), 7) == Rational{1, 7});
    CHECK(g_eval(GFunctionSpec::root_density(X2p1), 5) == Rational{2, 5});
    CHECK(g_eval(GFunctionSpec::root_density(X2p1), 3) == Rational{0, 1});
    CHECK(g_eval(GFunctionSpec::reciprocal_totient(2), 4) == Rational{0, 1});
    CHECK(g_eval(GFunctionSpec::reciprocal_totient(-1), 6) == Rational{1, 2});

    const GFunction gs[] = {GFunction(GFunctionSpec::reciprocal()), GFunction(GFunctionSpec::reciprocal_totient()),
                            GFunction(GFunctionSpec::root_density(X3m2))};
    for (const auto& g : gs) {
        for (std::uint64_t d = 1; d <= 2000; ++d) {
            const double v = g(d).value();
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 97ull}) {
            CHECK(g.at_prime(p) == doctest::Approx(g(p).value()));
            CHECK(g.at_prime_power(p, 3) == doctest::Approx(g(p * p * p).value()));
        }
    }
}

TEST_CASE("growth bound g(d) <= C^Omega(d) / d") {
    for (const auto& f : {X2p1, X3m2, X2mXm1}) {
        const RootCounter rc(f);
        const auto c = static_cast<double>(rc.bound_constant());
        const auto emp = empirical_bound_constant(rc, 20000);
        CHECK(emp.c <= c + 1e-12);
        for (std::uint64_t d = 1; d <= 20000; ++d)
            REQUIRE(static_cast<double>(rc.at(d)) <= std::pow(c, big_omega(d)) + 1e-9);
    }
}

TEST_CASE("mertens deviation stays bounded") {
    const GFunction rec(GFunctionSpec::reciprocal());
    const GFunction tot(GFunctionSpec::reciprocal_totient());
    const GFunction root(GFunctionSpec::root_density(X2p1));
    for (std::uint64_t x : {100ull, 1000ull, 10000ull, 100000ull}) {
        CHECK(std::abs(mertens_deviation(rec, x)) <= 3.0);
        CHECK(std::abs(mertens_deviation(tot, x)) <= 3.0);
        CHECK(std::abs(mertens_deviation(root, x)) <= 3.0);
    }
    // direct sum over primes up to 100
    double direct = 0;
    for (std::uint64_t p = 2; p <= 100; ++p)
        if (factorize_naive(p).factors.size() == 1 && factorize_naive(p).factors[0].exponent == 1)
            direct += std::log(static_cast<double>(p)) / static_cast<double>(p);
    CHECK(mertens_deviation(rec, 100) == doctest::Approx(direct - std::log(100.0)).epsilon(1e-12));
    CHECK_THROWS_AS(mertens_deviation(rec, 1), ValidationError);
}

TEST_CASE("partial sums") {
    const auto h10 = partial_sums_gh(GFunction(GFunctionSpec::reciprocal()), 10);
    CHECK(h10.sum_g == doctest::Approx(7381.0 / 2520).epsilon(1e-15));
    CHECK(!h10.sum_h);

    const GFunction root(GFunctionSpec::root_density(X2p1));
    const auto s = partial_sums_gh(root, 1000);
    REQUIRE(s.sum_h);
    CHECK(*s.sum_h <= 1000 * s.sum_g);
    double sg = 0, sh = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) {
        sh += static_cast<double>(scan(X2p1, n));
        sg += static_cast<double>(scan(X2p1, n)) / static_cast<double>(n);
    }
    CHECK(*s.sum_h == sh);
    CHECK(s.sum_g == doctest::Approx(sg).epsilon(1e-12));

    const GFunction tot(GFunctionSpec::reciprocal_totient());
    double st = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) st += 1.0 / static_cast<double>(euler_phi(n));
    CHECK(partial_sums_gh(tot, 1000).sum_g == doctest::Approx(st).epsilon(1e-12));
    CHECK_THROWS_AS(partial_sums_gh(tot, 100, 10), ResourceError);
}
