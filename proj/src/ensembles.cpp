#include "lossprop/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lossprop/propagation.hpp"

namespace lossprop {

namespace {

// SplitMix64 finalizer: mixes (seed, index) into the per-member stream seed so
// the streams are independent and do not depend on the member count.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Variate mappings are spelled out (instead of std::*_distribution) because
// the standard fixes the mt19937_64 bit stream but not the distributions;
// this keeps draws reproducible across standard libraries.
double uniform_unit(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;  // [0, 1), 53-bit mantissa
}

// One Box-Muller pair of independent standard normals.
std::pair<double, double> normal_pair(std::mt19937_64& rng) {
    const double u1 = double((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1], ln stays finite
    const double u2 = uniform_unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<std::pair<int, int>> full_grid(const PhotonCutoff& cutoff) {
    std::vector<std::pair<int, int>> cells;
    cells.reserve(cutoff.pair_dim());
    for (int l = 0; l <= cutoff.n_max; ++l)
        for (int m = 0; m <= cutoff.n_max; ++m) cells.emplace_back(l, m);
    return cells;
}

AggregateStats aggregate(std::vector<double> values) {
    AggregateStats stats{};
    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    const std::size_t n = values.size();
    stats.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / double(n);
    return stats;
}

}  // namespace

TwoModeState sample_state(const EnsembleSpec& spec, int index) {
    if (index < 0 || index >= spec.count)
        throw IndexOutOfRange("ensemble index " + std::to_string(index) + " outside [0, " +
                              std::to_string(spec.count) + ")");

    std::vector<std::pair<int, int>> cells = spec.subspace.empty() ? full_grid(spec.cutoff)
                                                                   : spec.subspace;
    if (!spec.subspace.empty()) {
        for (auto [l, m] : cells)
            if (l < 0 || m < 0 || l > spec.cutoff.n_max || m > spec.cutoff.n_max)
                throw IndexOutOfRange("subspace cell (" + std::to_string(l) + ", " +
                                      std::to_string(m) + ") outside cutoff");
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    }

    std::mt19937_64 rng(stream_seed(spec.seed, std::uint64_t(index)));
    Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(spec.cutoff.dim(), spec.cutoff.dim());
    for (auto [l, m] : cells) {
        if (spec.distribution == Distribution::UniformBox) {
            const double re = 2.0 * uniform_unit(rng) - 1.0;
            const double im = 2.0 * uniform_unit(rng) - 1.0;
            alpha(l, m) = cxd(re, im);
        } else {
            const auto [re, im] = normal_pair(rng);
            alpha(l, m) = cxd(re, im);
        }
    }
    return make_two_mode_state(spec.cutoff, alpha);
}

SweepResult run_sweep(const std::vector<TwoModeState>& states, const SweepSpec& sweep) {
    if (states.empty()) throw std::invalid_argument("sweep needs at least one state");
    if (sweep.steps < 2) throw std::invalid_argument("sweep needs at least two grid points");
    if (!(sweep.x_start >= 0.0) || !(sweep.x_stop > sweep.x_start))
        throw std::invalid_argument("sweep needs 0 <= x_start < x_stop");

    std::vector<double> grid(sweep.steps);
    for (int j = 0; j < sweep.steps; ++j)
        grid[j] = sweep.x_start +
                  (sweep.x_stop - sweep.x_start) * double(j) / double(sweep.steps - 1);

    SweepResult result;
    result.per_state.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        result.per_state[i].reserve(grid.size());
        for (double x : grid) {
            const TwoModeDensityMatrix rho =
                general_output(states[i], sweep.channels, PropagationPoint{x, x});
            try {
                result.per_state[i].push_back(evaluate_metrics(x, rho));
            } catch (const EigensolverFailure& e) {
                throw EigensolverFailure(std::string(e.what()) + " (state " + std::to_string(i) +
                                         ", x = " + std::to_string(x) + ")");
            }
        }
    }

    result.aggregates.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        std::vector<double> coh, neg, terr, mineig, pur;
        for (const auto& rows : result.per_state) {
            coh.push_back(rows[j].coherence_power);
            neg.push_back(rows[j].negativity);
            terr.push_back(rows[j].trace_error);
            mineig.push_back(rows[j].min_eigenvalue);
            pur.push_back(rows[j].purity);
        }
        result.aggregates.push_back(DistanceAggregate{grid[j], aggregate(std::move(coh)),
                                                      aggregate(std::move(neg)),
                                                      aggregate(std::move(terr)),
                                                      aggregate(std::move(mineig)),
                                                      aggregate(std::move(pur))});
    }
    return result;
}

SweepResult run_sweep(const EnsembleSpec& spec, const SweepSpec& sweep) {
    if (spec.count < 1) throw std::invalid_argument("ensemble needs at least one member");
    std::vector<TwoModeState> states;
    states.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) states.push_back(sample_state(spec, i));
    return run_sweep(states, sweep);
}

}  // namespace lossprop
