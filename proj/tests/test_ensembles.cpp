#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "lossprop/ensembles.hpp"
#include "lossprop/errors.hpp"
#include "lossprop/experiments.hpp"
#include "lossprop/propagation.hpp"
#include "test_helpers.hpp"

using namespace lossprop;

TEST_SUITE("ensembles") {

TEST_CASE("sampling is deterministic and index-independent") {
    EnsembleSpec spec{Distribution::SphereUniform, PhotonCutoff(3), 10, 42u, {}};
    const TwoModeState a = sample_state(spec, 4);
    const TwoModeState b = sample_state(spec, 4);
    CHECK(test_helpers::max_abs_diff(a.alpha, b.alpha) == 0.0);

    // drawing member 4 does not depend on spec.count
    EnsembleSpec wider = spec;
    wider.count = 100;
    const TwoModeState c = sample_state(wider, 4);
    CHECK(test_helpers::max_abs_diff(a.alpha, c.alpha) == 0.0);

    // different indices and different seeds give different states
    CHECK(test_helpers::max_abs_diff(a.alpha, sample_state(spec, 5).alpha) > 1e-3);
    EnsembleSpec reseeded = spec;
    reseeded.seed = 43u;
    CHECK(test_helpers::max_abs_diff(a.alpha, sample_state(reseeded, 4).alpha) > 1e-3);

    CHECK_THROWS_AS(sample_state(spec, 10), IndexOutOfRange);
    CHECK_THROWS_AS(sample_state(spec, -1), IndexOutOfRange);
}

TEST_CASE("samples are normalized and the distributions differ") {
    EnsembleSpec sphere{Distribution::SphereUniform, PhotonCutoff(2), 5, 7u, {}};
    EnsembleSpec box{Distribution::UniformBox, PhotonCutoff(2), 5, 7u, {}};
    for (int i = 0; i < 5; ++i) {
        const TwoModeState s = sample_state(sphere, i);
        const TwoModeState b = sample_state(box, i);
        CHECK(std::fabs(s.alpha.squaredNorm() - 1.0) <= 1e-14);
        CHECK(std::fabs(b.alpha.squaredNorm() - 1.0) <= 1e-14);
        CHECK(test_helpers::max_abs_diff(s.alpha, b.alpha) > 1e-6);
    }
}

TEST_CASE("sphere draws are rotation-symmetric across grid cells") {
    // with n_max = 1 each of the 4 cells should carry mean weight 1/4;
    // 10^4 draws put the sample mean within 3 sigma ~ 0.0058 of that
    EnsembleSpec spec{Distribution::SphereUniform, PhotonCutoff(1), 10000, 20260814u, {}};
    double mean[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int i = 0; i < spec.count; ++i) {
        const TwoModeState s = sample_state(spec, i);
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 2; ++m) mean[l][m] += std::norm(s.alpha(l, m));
    }
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) CHECK(std::fabs(mean[l][m] / spec.count - 0.25) <= 0.0058);
}

TEST_CASE("subspace masks restrict the support") {
    EnsembleSpec spec{Distribution::SphereUniform, PhotonCutoff(4), 3, 9u,
                      {{4, 0}, {0, 4}, {2, 2}}};
    for (int i = 0; i < 3; ++i) {
        const TwoModeState s = sample_state(spec, i);
        double masked_weight = std::norm(s.alpha(4, 0)) + std::norm(s.alpha(0, 4)) +
                               std::norm(s.alpha(2, 2));
        CHECK(std::fabs(masked_weight - 1.0) <= 1e-14);
    }
    EnsembleSpec bad = spec;
    bad.subspace = {{5, 0}};
    CHECK_THROWS_AS(sample_state(bad, 0), IndexOutOfRange);
}

TEST_CASE("sweeps cover the grid and aggregate in order") {
    EnsembleSpec spec{Distribution::UniformBox, PhotonCutoff(2), 6, 3u, {}};
    SweepSpec sweep{0.0, 6.0, 13, test_helpers::channels()};
    const SweepResult result = run_sweep(spec, sweep);
    REQUIRE(result.per_state.size() == 6);
    REQUIRE(result.aggregates.size() == 13);
    for (const auto& rows : result.per_state) REQUIRE(rows.size() == 13);
    CHECK(result.aggregates.front().x == 0.0);
    CHECK(result.aggregates.back().x == 6.0);
    CHECK(result.per_state[0][1].x == doctest::Approx(0.5).epsilon(1e-15));

    for (const auto& agg : result.aggregates) {
        for (const AggregateStats& stats :
             {agg.coherence_power, agg.negativity, agg.purity, agg.trace_error}) {
            CHECK(stats.min <= stats.median);
            CHECK(stats.median <= stats.max);
            CHECK(stats.mean >= stats.min);
            CHECK(stats.mean <= stats.max);
        }
    }

    // median of an even member count is the average of the two middle values
    std::vector<double> coh;
    for (const auto& rows : result.per_state) coh.push_back(rows[3].coherence_power);
    std::sort(coh.begin(), coh.end());
    const double expected_median = 0.5 * (coh[2] + coh[3]);
    CHECK(result.aggregates[3].coherence_power.median == expected_median);
}

TEST_CASE("sweeps are bit-for-bit reproducible") {
    EnsembleSpec spec{Distribution::SphereUniform, PhotonCutoff(3), 4, 11u, {}};
    SweepSpec sweep{0.0, 10.0, 11, test_helpers::channels()};
    const SweepResult r1 = run_sweep(spec, sweep);
    const SweepResult r2 = run_sweep(spec, sweep);
    for (size_t i = 0; i < r1.per_state.size(); ++i) {
        for (size_t j = 0; j < r1.per_state[i].size(); ++j) {
            const MetricRecord& a = r1.per_state[i][j];
            const MetricRecord& b = r2.per_state[i][j];
            CHECK(a.coherence_power == b.coherence_power);
            CHECK(a.negativity == b.negativity);
            CHECK(a.trace_error == b.trace_error);
            CHECK(a.min_eigenvalue == b.min_eigenvalue);
            CHECK(a.purity == b.purity);
        }
    }
}

TEST_CASE("a singleton noon sweep reproduces the analytic coherence slope") {
    SweepSpec sweep{0.0, 2.0, 21, test_helpers::channels(0.2, 1.0, 0.2, 1.0)};
    const SweepResult result = run_sweep({noon_state(10)}, sweep);
    REQUIRE(result.per_state.size() == 1);
    std::vector<double> xs, logs;
    for (const MetricRecord& rec : result.per_state[0]) {
        xs.push_back(rec.x);
        logs.push_back(std::log(rec.coherence_power));
    }
    const double slope = least_squares_slope(xs, logs);
    // ln coherence = ln(1/2) - 2 n mu x with n = 10, mu = 0.2
    CHECK(std::fabs(slope + 4.0) <= 1e-9);
}

}  // TEST_SUITE
