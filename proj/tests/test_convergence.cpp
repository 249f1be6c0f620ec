#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deblur1d/convergence.hpp"

using namespace deblur;

TEST_CASE("multiplication operator: constants are exact") {
    PriorParams p(0.25, 4.0);
    auto r = check_mult_conv([](double) { return 0.7; }, {2, 3, 4}, p);
    for (double v : r.values) CHECK(v == doctest::Approx(0.0));
    CHECK(r.pass);
}

TEST_CASE("multiplication operator: first-order decay for smooth v") {
    PriorParams p(0.25, 4.0);
    auto r = check_mult_conv([](double x) { return std::sin(2 * std::numbers::pi * x); },
                             {3, 4, 5, 6, 7}, p);
    REQUIRE(r.values.size() == 5);
    double geo = 1.0;
    for (size_t i = 0; i + 1 < r.values.size(); ++i) {
        double ratio = r.values[i] / r.values[i + 1];
        CHECK(ratio >= 1.4);
        geo *= ratio;
    }
    CHECK(std::pow(geo, 0.25) >= 1.8);
    CHECK(r.pass);
    CHECK(r.rate == doctest::Approx(-1.0).epsilon(0.25));
}

TEST_CASE("multiplication operator: jump is flagged, not failed") {
    PriorParams p(0.25, 4.0);
    // jump off the dyadic grid so some cell always straddles it
    auto r = check_mult_conv([](double x) { return x < 0.3 ? 0.0 : 1.0; }, {3, 4, 5, 6}, p);
    CHECK(r.pass);  // hypothesis violation is a note, not a failure
    CHECK(!r.note.empty());
    // the sup metric genuinely refuses to decay at the jump
    CHECK(r.values.back() > 0.5 * r.values.front());
}

TEST_CASE("projection convergence guard and decay") {
    PriorParams p(0.25, 4.0);
    CHECK_THROWS_AS(check_proj_conv({2, 3}, 0.5, p), std::invalid_argument);
    CHECK_THROWS_AS(check_proj_conv({2, 3}, 0.9, p), std::invalid_argument);

    auto r = check_proj_conv({2, 3, 4, 5, 6}, 0.4, p);
    for (size_t i = 0; i + 1 < r.values.size(); ++i) CHECK(r.values[i + 1] < r.values[i]);
    CHECK(r.pass);

    // t = 0 is plain L2 approximation: rate about -1 in N
    auto r0 = check_proj_conv({2, 3, 4, 5, 6}, 0.0, p);
    CHECK(r0.pass);
    CHECK(r0.rate == doctest::Approx(-1.0).epsilon(0.3));
    // stronger target norm decays slower
    for (size_t i = 0; i < r.values.size(); ++i) CHECK(r.values[i] >= r0.values[i] * 0.99);
}

TEST_CASE("gaussian weak convergence for smooth v") {
    PriorParams p(0.25, 4.0);
    auto rs = check_gaussian_weak_conv(
        [](double x) { return 1.0 + 0.5 * std::sin(2 * std::numbers::pi * x); }, {2, 3, 4, 5}, p);
    REQUIRE(rs.size() == 2);
    const auto& opnorm = rs[0];
    const auto& trace = rs[1];
    CHECK(opnorm.pass);
    CHECK(trace.pass);
    for (size_t i = 0; i + 1 < opnorm.values.size(); ++i)
        CHECK(opnorm.values[i + 1] < opnorm.values[i]);
    for (size_t i = 0; i + 1 < trace.values.size(); ++i)
        CHECK(trace.values[i + 1] < trace.values[i]);
}

TEST_CASE("trace differences halve for constant v") {
    PriorParams p(0.25, 4.0);
    auto rs = check_gaussian_weak_conv([](double) { return 1.0; }, {2, 3, 4, 5}, p);
    const auto& trace = rs[1];
    // the added-mode tail gives a ratio approaching 2 from below
    for (size_t i = 0; i + 1 < trace.values.size(); ++i)
        CHECK(trace.values[i] >= 1.75 * trace.values[i + 1]);
}

TEST_CASE("exponential moment uniformity band") {
    PriorParams p(0.25, 4.0);
    CHECK_THROWS_AS(check_exp_moments({3, 4}, 0.0, 100, p, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_exp_moments({3, 4}, -1.0, 100, p, 1), std::invalid_argument);

    auto r = check_exp_moments({3, 4, 5}, 1.0, 4000, p, 17);
    REQUIRE(r.values.size() == 3);
    for (double v : r.values) CHECK(std::isfinite(v));
    CHECK(r.pass);
}
