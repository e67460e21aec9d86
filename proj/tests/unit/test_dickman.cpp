#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdlab/common.hpp"
#include "pdlab/dickman.hpp"

using namespace pdlab;

namespace {

const RhoTable& table() {
    static const RhoTable t;
    return t;
}

// rho(3) = rho(2) - \int_2^3 rho(t-1)/t dt with rho(t-1) = 1 - log(t-1) on
// [2,3], i.e. rho(2) - log(3/2) + \int_2^3 log(t-1)/t dt; composite Simpson.
double rho3_oracle() {
    const int n = 20000;
    const double h = 1.0 / n;
    auto f = [](double t) { return std::log(t - 1.0) / t; };
    double acc = f(2.0) + f(3.0);
    for (int i = 1; i < n; ++i) acc += f(2.0 + i * h) * (i % 2 ? 4 : 2);
    return (1.0 - std::log(2.0)) - std::log(1.5) + acc * h / 3;
}

}  // namespace

TEST_CASE("rho equals one on (0,1]") {
    CHECK(table()(1e-9) == 1.0);
    CHECK(table()(0.5) == 1.0);
    CHECK(table()(1.0) == 1.0);
}

TEST_CASE("rho matches 1 - log u on [1,2]") {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double u = 1.0 + i / 99.0;
        worst = std::max(worst, std::abs(table()(u) - (1.0 - std::log(u))));
    }
    CHECK(worst <= 1e-10);
    CHECK(table()(2.0) == doctest::Approx(0.3068528194).epsilon(1e-10));
}

TEST_CASE("rho(3) against an independent quadrature of the delay relation") {
    CHECK(std::abs(table()(3.0) - rho3_oracle()) < 1e-9);
}

TEST_CASE("refining the subpanels changes nothing at 1e-11") {
    const RhoTable fine(RhoTable::Options{10.0, 16, 16});
    const RhoTable coarse(RhoTable::Options{10.0, 8, 16});
    double worst = 0;
    for (int i = 1; i <= 1000; ++i) {
        const double u = i / 100.0;
        worst = std::max(worst, std::abs(fine(u) - coarse(u)));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("rho is positive and decreasing on the table") {
    double prev = 1.0;
    for (int i = 1; i <= 2000; ++i) {
        const double u = 1.0 + i * 0.0095;
        const double r = table()(u);
        CHECK(r > 0.0);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(table()(20.0) > 0.0);
    CHECK(table()(20.0) == doctest::Approx(2.4617828e-29).epsilon(1e-6));
}

TEST_CASE("arguments outside the table are rejected") {
    CHECK_THROWS_AS(table()(0.0), ValidationError);
    CHECK_THROWS_AS(table()(-1.0), ValidationError);
    CHECK_THROWS_AS(table()(20.5), ValidationError);
}

TEST_CASE("cdf of the largest coordinate") {
    CHECK(cdf_largest(table(), 1.0) == 1.0);
    CHECK(cdf_largest(table(), 0.5) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
    CHECK(cdf_largest(table(), 1.0 / 3.0) == doctest::Approx(table()(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(cdf_largest(table(), 0.0), ValidationError);
    CHECK_THROWS_AS(cdf_largest(table(), 1.5), ValidationError);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s0 = 0, s14 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s0 += w[i];
        s14 += w[i] * std::pow(x[i], 14);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s14 == doctest::Approx(2.0 / 15).epsilon(1e-13));
}

TEST_CASE("csv dump") {
    const RhoTable t(RhoTable::Options{3.0, 8, 16});
    std::ostringstream out;
    t.write_csv(out, 0.5);
    const std::string s = out.str();
    CHECK(s.rfind("u,rho\n", 0) == 0);
    CHECK(s.find("\n1,1\n") != std::string::npos);
    CHECK(s.find("\n3,") != std::string::npos);
}
