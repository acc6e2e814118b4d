#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lossprop/errors.hpp"
#include "lossprop/fock.hpp"
#include "lossprop/medium.hpp"
#include "lossprop/metrics.hpp"
#include "lossprop/propagation.hpp"
#include "test_helpers.hpp"

using namespace lossprop;
using test_helpers::max_abs_diff;

namespace {

// distance at which survival e^{-0.2 x} is exactly one half
const double kHalfSurvivalDistance = std::log(2.0) / 0.2;

}  // namespace

TEST_SUITE("propagation") {

TEST_CASE("single-mode populations are binomially thinned") {
    const MediumProfile prof = MediumProfile::constant(0.2, 1.0);
    const SingleModeDensityMatrix rho = single_mode_output(4, prof, kHalfSurvivalDistance);
    const double expected[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    for (int k = 0; k < 5; ++k) {
        CHECK(std::fabs(rho.elements(k, k).real() - expected[k]) <= 1e-14);
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != j) CHECK(std::abs(rho.elements(i, j)) == 0.0);
    CHECK(std::fabs(rho.elements.trace().real() - 1.0) <= 1e-14);
}

TEST_CASE("single-mode mean photon number decays exponentially") {
    const MediumProfile prof = MediumProfile::constant(0.2, 0.0);
    for (double x : {0.0, 0.7, 2.0, 11.0, 25.0}) {
        const SingleModeDensityMatrix rho = single_mode_output(10, prof, x);
        CHECK(std::fabs(mean_photon_number(rho) - 10.0 * std::exp(-0.2 * x)) <= 1e-12);
        CHECK(std::fabs(rho.elements.trace().real() - 1.0) <= 1e-13);
    }
    // zero distance reproduces the input Fock state exactly
    const SingleModeDensityMatrix at_zero = single_mode_output(7, prof, 0.0);
    CHECK(at_zero.elements(7, 7) == cxd(1.0, 0.0));
    CHECK_THROWS_AS(single_mode_output(31, prof, 1.0), CutoffExceeded);
    CHECK_THROWS_AS(single_mode_output(-1, prof, 1.0), CutoffExceeded);
}

TEST_CASE("noon output matches the pure projector at zero distance") {
    const ChannelPair ch = test_helpers::channels(0.2, 1.0, 0.35, -0.4);
    for (int n : {1, 4, 10}) {
        const TwoModeDensityMatrix evolved = noon_output(n, ch, 0.0);
        const TwoModeDensityMatrix pure = pure_density_matrix(noon_state(n));
        CHECK(max_abs_diff(evolved.elements, pure.elements) <= 1e-15);
    }
}

TEST_CASE("noon coherence decays with rate n * (depth_a + depth_b)") {
    const ChannelPair ch = test_helpers::channels(0.2, 1.0, 0.2, 1.0);
    for (int n : {1, 10}) {
        for (double x : {0.5, 2.0, 5.0}) {
            const TwoModeDensityMatrix rho = noon_output(n, ch, x);
            const PhotonCutoff cut(n);
            const cxd coh = rho.elements(flatten(cut, n, 0), flatten(cut, 0, n));
            const double expected_mag = 0.5 * std::exp(-0.5 * n * (0.2 * x + 0.2 * x));
            CHECK(std::fabs(std::abs(coh) - expected_mag) <= 1e-12 * expected_mag);
            CHECK(std::fabs(coherence_power(rho) - 2.0 * expected_mag * expected_mag) <=
                  1e-12 * expected_mag * expected_mag);
        }
    }
}

TEST_CASE("noon coherence phase winds n times the single-photon phase difference") {
    // phase difference eta_a - eta_b = 1 per km; at x = pi the n = 1 coherence is real negative
    const ChannelPair ch = test_helpers::channels(0.2, 1.0, 0.2, 0.0);
    const double x = std::acos(-1.0);
    const TwoModeDensityMatrix rho1 = noon_output(1, ch, x);
    const PhotonCutoff cut1(1);
    const cxd coh1 = rho1.elements(flatten(cut1, 1, 0), flatten(cut1, 0, 1));
    CHECK(coh1.real() < 0.0);
    CHECK(std::fabs(coh1.imag()) <= 1e-12 * std::abs(coh1));

    // n = 2 at x = pi winds a full turn: coherence back to the positive real axis
    const TwoModeDensityMatrix rho2 = noon_output(2, ch, x);
    const PhotonCutoff cut2(2);
    const cxd coh2 = rho2.elements(flatten(cut2, 2, 0), flatten(cut2, 0, 2));
    CHECK(coh2.real() > 0.0);
    CHECK(std::fabs(coh2.imag()) <= 1e-12 * std::abs(coh2));
}

TEST_CASE("noon diagonal blocks are half binomial ladders") {
    const ChannelPair ch = test_helpers::channels(0.2, 1.0, 0.4, 1.0);
    const int n = 5;
    const double x = 1.3;
    const TwoModeDensityMatrix rho = noon_output(n, ch, x);
    const PhotonCutoff cut(n);
    const double sa = std::exp(-0.2 * x);
    const double sb = std::exp(-0.4 * x);
    for (int k = 0; k <= n; ++k) {
        double expected_a = 0.5 * static_cast<double>(std::round(std::exp(
                                      std::lgamma(n + 1) - std::lgamma(k + 1) -
                                      std::lgamma(n - k + 1)))) *
                            std::pow(sa, k) * std::pow(1.0 - sa, n - k);
        double expected_b = 0.5 * static_cast<double>(std::round(std::exp(
                                      std::lgamma(n + 1) - std::lgamma(k + 1) -
                                      std::lgamma(n - k + 1)))) *
                            std::pow(sb, k) * std::pow(1.0 - sb, n - k);
        double got_a = rho.elements(flatten(cut, k, 0), flatten(cut, k, 0)).real();
        double got_b = rho.elements(flatten(cut, 0, k), flatten(cut, 0, k)).real();
        if (k == 0) {
            // vacuum cell carries both halves
            CHECK(std::fabs(got_a - (expected_a + expected_b)) <= 1e-13);
            CHECK(got_a == got_b);
        } else {
            CHECK(std::fabs(got_a - expected_a) <= 1e-13);
            CHECK(std::fabs(got_b - expected_b) <= 1e-13);
        }
    }
    CHECK(std::fabs(rho.elements.trace().real() - 1.0) <= 1e-13);
}

TEST_CASE("general output at zero distance reproduces the pure projector") {
    const ChannelPair ch = test_helpers::channels();
    const TwoModeState state = test_helpers::random_state(4, 99u);
    const TwoModeDensityMatrix evolved = general_output(state, ch, {0.0, 0.0});
    const TwoModeDensityMatrix pure = pure_density_matrix(state);
    CHECK(max_abs_diff(evolved.elements, pure.elements) <= 1e-12);
}

TEST_CASE("general output agrees with the closed-form noon output") {
    const ChannelPair ch = test_helpers::channels(0.2, 1.0, 0.35, 0.4);
    for (int n : {2, 5}) {
        for (double x : {0.0, 0.8, 2.5}) {
            const TwoModeDensityMatrix general = general_output(noon_state(n), ch, {x, x});
            const TwoModeDensityMatrix closed = noon_output(n, ch, x);
            CHECK(max_abs_diff(general.elements, closed.elements) <= 1e-12);
        }
    }
}

TEST_CASE("parallel kernel matches the serial reference") {
    const ChannelPair ch = test_helpers::channels(0.3, 1.2, 0.15, -0.7);
    const TwoModeState state = test_helpers::random_state(4, 4242u);
    for (auto point : {PropagationPoint{0.0, 0.0}, PropagationPoint{1.0, 1.0},
                       PropagationPoint{0.5, 2.0}}) {
        const TwoModeDensityMatrix fast = general_output(state, ch, point);
        const TwoModeDensityMatrix slow = general_output_serial(state, ch, point);
        CHECK(max_abs_diff(fast.elements, slow.elements) <= 1e-14);
    }
}

TEST_CASE("both analytic summation orders agree") {
    for (int n : {2, 4, 6}) {
        const TwoModeState state = test_helpers::random_state(n, 1000u + n);
        const ChannelPair ch = test_helpers::channels(0.4, 0.9, 0.25, -1.1);
        for (double x : {0.3, 1.9, 6.0}) {
            const TwoModeDensityMatrix b = general_output(state, ch, {x, x});
            const TwoModeDensityMatrix a = general_output_form_a(state, ch, {x, x});
            CHECK(max_abs_diff(a.elements, b.elements) <= 1e-12);
        }
    }
}

TEST_CASE("general output preserves trace and hermiticity") {
    const ChannelPair ch = test_helpers::channels();
    const TwoModeState state = test_helpers::random_state(5, 7u);
    const TwoModeDensityMatrix rho = general_output(state, ch, {1.7, 0.4});
    CHECK(std::fabs(rho.elements.trace().real() - 1.0) <= 1e-12);
    CHECK(rho.hermiticity_defect <= 1e-13);
    CHECK(max_abs_diff(rho.elements, rho.elements.adjoint()) == 0.0);
    CHECK(min_eigenvalue(rho) >= -1e-12);
}

TEST_CASE("deep channels drive every state to vacuum") {
    const ChannelPair ch = test_helpers::channels(1.0, 0.3, 1.0, -0.2);
    const TwoModeState state = test_helpers::random_state(3, 31u);
    const TwoModeDensityMatrix rho = general_output(state, ch, {50.0, 50.0});
    Eigen::MatrixXcd vacuum = Eigen::MatrixXcd::Zero(16, 16);
    vacuum(0, 0) = 1.0;
    CHECK(max_abs_diff(rho.elements, vacuum) <= 1e-8);
}

TEST_CASE("phase profile rotates coherences without touching magnitudes") {
    const TwoModeState state = test_helpers::random_state(3, 555u);
    const double x = 1.4;
    const double delta = 0.8;
    const ChannelPair base = test_helpers::channels(0.2, 1.0, 0.3, 0.5);
    const ChannelPair shifted = test_helpers::channels(0.2, 1.0 + delta, 0.3, 0.5);
    const TwoModeDensityMatrix r0 = general_output(state, base, {x, x});
    const TwoModeDensityMatrix r1 = general_output(state, shifted, {x, x});
    const PhotonCutoff cut = state.cutoff;
    double worst = 0.0;
    for (int i = 0; i < cut.pair_dim(); ++i) {
        for (int j = 0; j < cut.pair_dim(); ++j) {
            const auto [p, q] = unflatten(cut, i);
            const auto [pp, qq] = unflatten(cut, j);
            const cxd twist = std::polar(1.0, (p - pp) * delta * x);
            worst = std::max(worst, std::abs(r1.elements(i, j) - twist * r0.elements(i, j)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("populations are independent of the phase profile") {
    const TwoModeState state = test_helpers::random_state(3, 808u);
    const TwoModeDensityMatrix r0 =
        general_output(state, test_helpers::channels(0.2, 0.0, 0.3, 0.0), {2.0, 2.0});
    const TwoModeDensityMatrix r1 =
        general_output(state, test_helpers::channels(0.2, 7.0, 0.3, -3.0), {2.0, 2.0});
    double worst = 0.0;
    for (int i = 0; i < state.cutoff.pair_dim(); ++i)
        worst = std::max(worst, std::abs(r1.elements(i, i) - r0.elements(i, i)));
    CHECK(worst <= 1e-13);
}

TEST_CASE("mode means thin independently under asymmetric distances") {
    const TwoModeState state = test_helpers::random_state(4, 2024u);
    const ChannelPair ch = test_helpers::channels(0.25, 0.0, 0.4, 0.0);
    const auto [na0, nb0] = mean_photon_numbers(pure_density_matrix(state));
    const PropagationPoint point{1.0, 2.0};
    const TwoModeDensityMatrix rho = general_output(state, ch, point);
    const auto [na, nb] = mean_photon_numbers(rho);
    CHECK(std::fabs(na - na0 * std::exp(-0.25 * 1.0)) <= 1e-12);
    CHECK(std::fabs(nb - nb0 * std::exp(-0.4 * 2.0)) <= 1e-12);
}

TEST_CASE("rearranged-sum terms vanish exactly outside their support") {
    CombinatoricsTable table(6);
    const TwoModeState state = test_helpers::random_state(3, 9u);
    // keeping more photons than arrived
    CHECK(detail::form_a_term(state, table, 2, 1, 2, 1, 3, 0, 0.5, 0.5, 0.0, 0.0) == cxd(0.0, 0.0));
    CHECK(detail::form_a_term(state, table, 2, 1, 2, 1, 0, 2, 0.5, 0.5, 0.0, 0.0) == cxd(0.0, 0.0));
    // negative kept counts on the bra side
    CHECK(detail::form_a_term(state, table, 1, 1, 3, 1, 0, 0, 0.5, 0.5, 0.0, 0.0) != cxd(0.0, 0.0));
    CHECK(detail::form_a_term(state, table, 3, 1, 1, 1, 0, 0, 0.5, 0.5, 0.0, 0.0) == cxd(0.0, 0.0));
}

}  // TEST_SUITE
