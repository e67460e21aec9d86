#include <doctest.h>

#include <cmath>

#include "pdlab/common.hpp"
#include "pdlab/pdprocess.hpp"

using namespace pdlab;

namespace {

const double kRho2 = 1.0 - std::log(2.0);

// \int_{0.4}^{0.5} log((1 - t) / 0.5) / t dt by composite Simpson: the
// clipped box [0.4,0.6] x [0.5,0.7] written as a single integral (for
// t1 > 0.5 the simplex leaves no room for t2 >= 0.5, and 1 - t1 < 0.7).
double clipped_box_oracle() {
    const int n = 2000;
    const double a = 0.4, b = 0.5, h = (b - a) / n;
    auto f = [](double t) { return std::log((1.0 - t) / 0.5) / t; };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST_CASE("forced halves give the closed-form sticks") {
    const auto s = sample_pd([] { return 0.5; }, 1e-12);
    REQUIRE(s.entries.size() >= 40);
    double expect = 0.5;
    for (std::size_t i = 0; i < s.entries.size(); ++i, expect /= 2) CHECK(s.entries[i] == expect);
    CHECK(s.tail_mass < 1e-12);
    double sum = s.tail_mass;
    for (double v : s.entries) sum += v;
    CHECK(sum == 1.0);
    CHECK(s.exact_prefix == s.entries.size());
}

TEST_CASE("stick partial sums telescope to 1 - prod U") {
    // Dyadic uniforms keep every product and difference exact in binary64.
    const double us[] = {0.5, 0.25, 0.75};
    int i = 0;
    const auto st = stick_breaking([&] { return us[i++ % 3]; }, 1e-9);
    double partial = 0.0, prod = 1.0;
    for (std::size_t j = 0; j < st.sticks.size(); ++j) {
        partial += st.sticks[j];
        prod *= us[j % 3];
        CHECK(partial == 1.0 - prod);
    }
    CHECK(prod == st.residual);
}

TEST_CASE("sampled mass identity") {
    for (std::uint64_t i = 0; i < 100000; ++i) {
        RandomStream rng(77, i);
        const auto s = sample_pd(rng);
        double sum = s.tail_mass;
        for (std::size_t j = 0; j < s.entries.size(); ++j) {
            sum += s.entries[j];
            if (j) REQUIRE(s.entries[j] <= s.entries[j - 1]);
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-12);
        REQUIRE(s.tail_mass < 1e-12);
        REQUIRE(s.exact_prefix >= 1);
    }
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(sample_pd(rng, 0.0), ValidationError);
    CHECK_THROWS_AS(sample_pd(rng, 1e-3), ValidationError);
}

TEST_CASE("box correlation product formula") {
    const Interval one[] = {{0.25, 0.5}};
    CHECK(*box_correlation_exact(one) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const Interval two[] = {{0.1, 0.2}, {0.3, 0.4}};
    CHECK(*box_correlation_exact(two) == doctest::Approx(std::log(2.0) * std::log(4.0 / 3.0)).epsilon(1e-15));
    const Interval empty[] = {{0.3, 0.3}};
    CHECK(*box_correlation_exact(empty) == 0.0);
    const Interval overlap[] = {{0.1, 0.3}, {0.2, 0.4}};
    CHECK(!box_correlation_exact(overlap));
    const Interval too_big[] = {{0.4, 0.6}, {0.1, 0.45}};
    CHECK(!box_correlation_exact(too_big));
}

TEST_CASE("quadrature reproduces the product where it applies") {
    const auto one = BoxFunction::indicator({0.25}, {0.5});
    CHECK(correlation_integral(one) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const auto two = BoxFunction::indicator({0.1, 0.3}, {0.2, 0.4});
    CHECK(std::abs(correlation_integral(two) - std::log(2.0) * std::log(4.0 / 3.0)) < 1e-9);
    const auto three = BoxFunction::indicator({0.05, 0.2, 0.4}, {0.1, 0.3, 0.55});
    const double p3 = std::log(2.0) * std::log(1.5) * std::log(0.55 / 0.4);
    CHECK(std::abs(correlation_integral(three) - p3) < 1e-9);
}

TEST_CASE("quadrature of a simplex-clipped box") {
    const auto eta = BoxFunction::indicator({0.4, 0.5}, {0.6, 0.7});
    const double oracle = clipped_box_oracle();
    CHECK(std::abs(correlation_integral(eta) - oracle) < 1e-9);
    MCOptions o;
    o.seed = 5;
    const auto mc = corr_mc(eta, 200000, o);
    CHECK(std::abs(mc.estimate - oracle) <= 3 * mc.std_error);
}

TEST_CASE("distinct tuple sums") {
    const double u12[] = {std::log(3.0) / std::log(12.0), std::log(2.0) / std::log(12.0),
                          std::log(2.0) / std::log(12.0)};
    CHECK(distinct_tuple_sum(BoxFunction::indicator({0.25, 0.25}, {0.30, 0.30}), u12) == 2.0);
    CHECK(distinct_tuple_sum(BoxFunction::indicator({0.25}, {0.30}), u12) == 2.0);
    CHECK(distinct_tuple_sum(BoxFunction::indicator({0.25, 0.25, 0.25}, {0.5, 0.5, 0.5}), u12) == 6.0);
    CHECK(distinct_tuple_sum(BoxFunction::indicator({0.25, 0.25, 0.25}, {0.3, 0.5, 0.5}), u12) == 4.0);
    CHECK(distinct_tuple_sum(BoxFunction::indicator({0.25}, {0.30}, 0.0), u12) == 0.0);
    CHECK_THROWS_AS(BoxFunction::indicator({0.0}, {0.5}), ValidationError);
    CHECK_THROWS_AS(BoxFunction::indicator({0.5}, {0.5}), ValidationError);
}

TEST_CASE("Monte Carlo correlation") {
    MCOptions o;
    o.seed = 11;
    const auto eta = BoxFunction::indicator({0.25}, {0.5});
    const auto mc = corr_mc(eta, 200000, o);
    CHECK(std::abs(mc.estimate - std::log(2.0)) <= 3 * mc.std_error);
    CHECK(corr_mc(BoxFunction::indicator({0.25}, {0.5}, 0.0), 1000, o).estimate == 0.0);

    const auto eta2 = BoxFunction::indicator({0.1, 0.3}, {0.2, 0.4});
    const auto a = corr_mc(eta2, 50000, o);
    o.threads = 4;
    const auto b = corr_mc(eta2, 50000, o);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    const std::size_t perm[] = {1, 0};
    const auto c = corr_mc(eta2.permuted(perm), 50000, o);
    CHECK(a.estimate == c.estimate);
}

TEST_CASE("joint CDF estimators") {
    MCOptions o;
    o.seed = 3;
    const double one[] = {1.0};
    CHECK(joint_cdf_mc(one, 1000, o).estimate == 1.0);
    CHECK(joint_cdf_size_biased(one, 1000, o).estimate == doctest::Approx(1.0).epsilon(1e-15));

    const double half[] = {0.5};
    const auto p = joint_cdf_mc(half, 200000, o);
    CHECK(std::abs(p.estimate - kRho2) <= 3 * p.std_error);
    const auto q = joint_cdf_size_biased(half, 200000, o);
    CHECK(std::abs(q.estimate - kRho2) <= 3 * q.std_error);
    CHECK(q.std_error < p.std_error);

    const double c2[] = {0.9, 0.5};
    const auto r = joint_cdf_mc(c2, 200000, o);
    const auto s = joint_cdf_size_biased(c2, 200000, o);
    CHECK(std::abs(r.estimate - s.estimate) <= 3 * std::hypot(r.std_error, s.std_error));

    const double bad[] = {0.0};
    CHECK_THROWS_AS(joint_cdf_mc(bad, 10, o), ValidationError);
}
