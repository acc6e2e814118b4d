#include <cmath>
#include <vector>

#include "doctest.h"
#include "lossprop/errors.hpp"
#include "lossprop/medium.hpp"

using namespace lossprop;

TEST_SUITE("medium") {

TEST_CASE("constant profile integrates exactly") {
    const MediumProfile prof = MediumProfile::constant(0.2, 1.0);
    CHECK(prof.optical_depth(0.0) == 0.0);
    CHECK(prof.optical_depth(10.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(prof.accumulated_phase(3.0) == doctest::Approx(3.0).epsilon(1e-15));
    const MediumProfile neg_phase = MediumProfile::constant(0.1, -0.5);
    CHECK(neg_phase.accumulated_phase(4.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK_THROWS_AS(prof.optical_depth(-0.1), OutOfDomain);
    CHECK_THROWS_AS(MediumProfile::constant(-0.2, 1.0), OutOfDomain);
}

TEST_CASE("piecewise profile accumulates segment by segment") {
    const MediumProfile prof =
        MediumProfile::piecewise({{5.0, 0.1, 1.0}, {10.0, 0.3, -1.0}});
    CHECK(prof.optical_depth(10.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(prof.optical_depth(5.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prof.optical_depth(7.0) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(prof.accumulated_phase(7.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(prof.optical_depth(0.0) == 0.0);
    CHECK_THROWS_AS(prof.optical_depth(10.5), OutOfDomain);
    CHECK_THROWS_AS(prof.accumulated_phase(-1.0), OutOfDomain);
}

TEST_CASE("piecewise profile validation") {
    CHECK_THROWS_AS(MediumProfile::piecewise({}), OutOfDomain);
    CHECK_THROWS_AS(MediumProfile::piecewise({{5.0, 0.1, 0.0}, {5.0, 0.2, 0.0}}), OutOfDomain);
    CHECK_THROWS_AS(MediumProfile::piecewise({{5.0, -0.1, 0.0}}), OutOfDomain);
}

TEST_CASE("tabulated profile is exact for linear rate data") {
    // mu(z) = 0.1 + 0.02 z sampled coarsely: trapezoids integrate linear data exactly
    std::vector<ProfileSample> samples;
    for (int i = 0; i <= 10; ++i) {
        const double z = i * 1.0;
        samples.push_back({z, 0.1 + 0.02 * z, 0.5});
    }
    const MediumProfile prof = MediumProfile::tabulated(samples);
    for (double x : {0.0, 0.5, 3.0, 7.25, 10.0}) {
        const double expected = 0.1 * x + 0.01 * x * x;
        CHECK(prof.optical_depth(x) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(prof.accumulated_phase(x) == doctest::Approx(0.5 * x).epsilon(1e-14));
    }
}

TEST_CASE("sampled smooth profile integrates to analytic values") {
    const auto mu = [](double z) { return 0.2 + 0.05 * std::sin(0.5 * z); };
    const auto eta = [](double z) { return 1.0 + 0.1 * std::cos(0.3 * z); };
    const MediumProfile prof = MediumProfile::sampled(mu, eta, 5.0);
    for (double x : {1.0, 2.5, 5.0}) {
        const double depth = 0.2 * x + 0.1 * (1.0 - std::cos(0.5 * x));
        const double phase = x + (0.1 / 0.3) * std::sin(0.3 * x);
        CHECK(std::fabs(prof.optical_depth(x) - depth) <= 1e-8 * depth);
        CHECK(std::fabs(prof.accumulated_phase(x) - phase) <= 1e-8 * phase);
    }
}

TEST_CASE("tabulated profile validation") {
    CHECK_THROWS_AS(MediumProfile::tabulated({{0.0, 0.1, 0.0}}), OutOfDomain);
    CHECK_THROWS_AS(MediumProfile::tabulated({{1.0, 0.1, 0.0}, {2.0, 0.1, 0.0}}), OutOfDomain);
    CHECK_THROWS_AS(MediumProfile::tabulated({{0.0, 0.1, 0.0}, {0.0, 0.1, 0.0}}), OutOfDomain);
    const MediumProfile prof = MediumProfile::tabulated({{0.0, 0.1, 0.0}, {2.0, 0.3, 0.0}});
    CHECK_THROWS_AS(prof.optical_depth(2.5), OutOfDomain);
    // interior linear interpolation: mu rises linearly 0.1 -> 0.3
    CHECK(prof.optical_depth(2.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(prof.optical_depth(1.0) == doctest::Approx(0.15).epsilon(1e-15));
}

}  // TEST_SUITE
