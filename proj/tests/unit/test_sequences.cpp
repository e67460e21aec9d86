#include <doctest.h>

#include <bit>

#include "pdlab/sequences.hpp"

using namespace pdlab;

namespace {

const SequenceSpec kSpecs[] = {
    SequenceSpec::uniform(),
    SequenceSpec::shifted_primes(1),
    SequenceSpec::shifted_primes(-1),
    SequenceSpec::shifted_primes(7),
    SequenceSpec::polynomial({1, 0, 1}),
    SequenceSpec::polynomial({-1, -1, 1}),
    SequenceSpec::polynomial({-2, 0, 0, 1}),
    SequenceSpec::polynomial({-50, -3, 2}),
    SequenceSpec::thue_morse(),
};

}  // namespace

TEST_CASE("membership examples") {
    CHECK(membership(SequenceSpec::thue_morse(), 3));
    CHECK(!membership(SequenceSpec::thue_morse(), 7));
    CHECK(membership(SequenceSpec::shifted_primes(1), 4));
    CHECK(!membership(SequenceSpec::shifted_primes(1), 5));
    CHECK(membership(SequenceSpec::polynomial({1, 0, 1}), 10));
    CHECK(!membership(SequenceSpec::polynomial({1, 0, 1}), 11));
    CHECK(membership(SequenceSpec::shifted_primes(-1), 3));  // 2 + 1
    CHECK(!membership(SequenceSpec::shifted_primes(-1), 1));
    CHECK_THROWS_AS(membership(SequenceSpec::uniform(), 0), ValidationError);
}

TEST_CASE("enumerate examples") {
    CHECK(enumerate(SequenceSpec::uniform(), 5) == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(enumerate(SequenceSpec::shifted_primes(1), 10) == std::vector<std::uint64_t>{1, 2, 4, 6, 10});
    CHECK(enumerate(SequenceSpec::polynomial({1, 0, 1}), 50) == std::vector<std::uint64_t>{2, 5, 10, 17, 26, 37, 50});
    CHECK_THROWS_AS(SequenceSpec::polynomial({0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(SequenceSpec::polynomial({-1, 0, 1}), ValidationError);
    CHECK_THROWS_AS(SequenceSpec::polynomial({1, 0, 0, 0, 0, 0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(SequenceSpec::polynomial({1, 0, -2}), ValidationError);  // negative leading coefficient
    CHECK_THROWS_AS(SequenceSpec::polynomial({5}), ValidationError);
}

TEST_CASE("enumerate agrees with membership up to 1e4") {
    for (const auto& spec : kSpecs) {
        const Sequence seq(spec);
        std::vector<std::uint64_t> filtered;
        for (std::uint64_t n = 1; n <= 10000; ++n)
            if (seq.contains(n)) filtered.push_back(n);
        INFO(spec.name());
        CHECK(seq.enumerate(10000) == filtered);
        CHECK(seq.count(10000) == filtered.size());
    }
}

TEST_CASE("polynomial values below the monotone threshold") {
    // 2X^2 - 3X - 50 is negative for n <= 5; F(6) = 4, F(7) = 27.
    const Sequence s(SequenceSpec::polynomial({-50, -3, 2}));
    CHECK(s.enumerate(30) == std::vector<std::uint64_t>{4, 27});
    // X^3 - 7X + 7 (Eisenstein at 7) dips before it starts increasing.
    const Sequence dip(SequenceSpec::polynomial({7, -7, 0, 1}));
    // F(1) = 1, F(2) = 1, F(3) = 13, F(4) = 43
    CHECK(dip.enumerate(50) == std::vector<std::uint64_t>{1, 13, 43});
    CHECK(dip.contains(1));
    CHECK(dip.contains(43));
    CHECK(!dip.contains(7));
}

TEST_CASE("counts") {
    const Sequence u(SequenceSpec::uniform());
    CHECK(u.count(100) == 100);
    CHECK(u.count_in_class(100, 7) == 14);
    CHECK(count_in_class(SequenceSpec::shifted_primes(1), 10, 2) == 4);

    std::uint64_t brute = 0;
    for (std::uint64_t n = 1; n <= 10; ++n) {
        const std::uint64_t v = n * n + 1;
        brute += v <= 101 && v % 5 == 0;
    }
    CHECK(count_in_class(SequenceSpec::polynomial({1, 0, 1}), 101, 5) == brute);

    for (std::uint64_t x : {1ull, 2ull, 3ull, 7ull, 8ull, 100ull, 1023ull, 1024ull, 99999ull}) {
        std::uint64_t tm = 0;
        for (std::uint64_t n = 1; n <= x; ++n) tm += std::popcount(n) % 2 == 0;
        CHECK(thue_morse_count(x) == tm);
    }
    CHECK_THROWS_AS(u.count_in_class(10, 0), ValidationError);
}

TEST_CASE("N_d never exceeds N") {
    for (const auto& spec : kSpecs) {
        const Sequence s(spec);
        for (std::uint64_t x : {10ull, 1000ull, 20000ull})
            for (std::uint64_t d : {1ull, 2ull, 3ull, 5ull, 12ull, 97ull}) {
                const auto nd = s.count_in_class(x, d);
                CHECK(nd <= s.count(x));
                if (d == 1) CHECK(nd == s.count(x));
            }
    }
}

TEST_CASE("levels and g") {
    CHECK(SequenceSpec::uniform().level() == Rational{1, 1});
    CHECK(SequenceSpec::shifted_primes(1).level() == Rational{1, 2});
    CHECK(SequenceSpec::polynomial({-2, 0, 0, 1}).level() == Rational{1, 3});
    CHECK(SequenceSpec::thue_morse().level() == Rational{1, 1});
    CHECK(SequenceSpec::thue_morse().g().kind == GFunctionSpec::Kind::Reciprocal);
    CHECK(SequenceSpec::shifted_primes(1).g().kind == GFunctionSpec::Kind::ReciprocalTotient);
}

TEST_CASE("regularity ratios decay") {
    for (const auto& spec : {SequenceSpec::uniform(), SequenceSpec::shifted_primes(1)}) {
        const Sequence s(spec);
        for (double c : {0.5, 0.9}) {
            double prev = 1.0;
            for (std::uint64_t x : {10'000ull, 100'000ull, 1'000'000ull}) {
                const double r = s.regularity_ratio(x, c);
                CHECK(r <= prev * 1.01);
                prev = r;
            }
            if (c == 0.5) CHECK(prev < 0.2);
        }
    }
    CHECK(Sequence(SequenceSpec::uniform()).regularity_ratio(1'000'000, 0.5) == doctest::Approx(1e-3));
}

TEST_CASE("sieve capacity") {
    SequenceLimits lim;
    lim.sieve_limit = 1000;
    const Sequence s(SequenceSpec::shifted_primes(1), lim);
    CHECK_THROWS_AS(s.enumerate(5000), ResourceError);
    lim.max_members = 10;
    const Sequence u(SequenceSpec::uniform(), lim);
    CHECK_THROWS_AS(u.enumerate(11), ResourceError);
}
