#pragma once

#include <cstdint>
#include <vector>

#include "lossprop/fock.hpp"
#include "lossprop/medium.hpp"
#include "lossprop/metrics.hpp"

namespace lossprop {

// How random pure states are drawn before normalization:
//   UniformBox    - every Re/Im part uniform on [-1, 1], then normalized.
//   SphereUniform - every Re/Im part standard normal, then normalized; this is
//                   the rotation-invariant (uniform-on-the-sphere) draw.
enum class Distribution { UniformBox, SphereUniform };

struct EnsembleSpec {
    Distribution distribution = Distribution::SphereUniform;
    PhotonCutoff cutoff;
    int count = 25;
    std::uint64_t seed = 1;
    // Optional coefficient mask: when non-empty only the listed (l, m) grid
    // entries are drawn (in lexicographic order); everything else stays zero.
    std::vector<std::pair<int, int>> subspace;
};

// Deterministic member draw: the stream for (seed, index) is independent of
// every other index and of how many members are drawn.  Stream derivation and
// variate mappings are fixed (documented in the README), so identical
// (seed, index) reproduces the same state on any platform.
// Throws IndexOutOfRange unless 0 <= index < spec.count.
TwoModeState sample_state(const EnsembleSpec& spec, int index);

// Distance grid and channels of a sweep.
struct SweepSpec {
    double x_start = 0.0;
    double x_stop = 30.0;
    int steps = 61;  // >= 2, inclusive endpoints
    ChannelPair channels;
};

// Mean/median/min/max of one metric across ensemble members at one distance.
struct AggregateStats {
    double mean;
    double median;
    double min;
    double max;
};

struct DistanceAggregate {
    double x;
    AggregateStats coherence_power;
    AggregateStats negativity;
    AggregateStats trace_error;
    AggregateStats min_eigenvalue;
    AggregateStats purity;
};

struct SweepResult {
    // per_state[i][j]: metrics of member i at distance grid point j.
    std::vector<std::vector<MetricRecord>> per_state;
    std::vector<DistanceAggregate> aggregates;
};

// Propagates every ensemble member across the distance grid (same distance on
// both channels) and aggregates per distance.  Members are processed in index
// order and aggregation is an ordered reduction, so results are bit-for-bit
// reproducible for identical (spec, sweep).
SweepResult run_sweep(const EnsembleSpec& spec, const SweepSpec& sweep);

// Same sweep for explicitly given states (e.g. the singleton fixed-input case).
SweepResult run_sweep(const std::vector<TwoModeState>& states, const SweepSpec& sweep);

}  // namespace lossprop
