// Times the parallel propagation kernel against the serial reference on dense
// random inputs and on the sparse two-amplitude superposition.
//
//   usage: bench_propagation [cutoff] [repetitions]
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
static double omp_get_wtime() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
static int omp_get_max_threads() { return 1; }
#endif

#include "lossprop/ensembles.hpp"
#include "lossprop/propagation.hpp"

using namespace lossprop;

namespace {

double time_call(const TwoModeState& state, const ChannelPair& channels, int reps,
                 TwoModeDensityMatrix (*fn)(const TwoModeState&, const ChannelPair&,
                                            const PropagationPoint&),
                 TwoModeDensityMatrix& last) {
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) last = fn(state, channels, PropagationPoint{2.5, 2.5});
    return (omp_get_wtime() - t0) / reps;
}

void report(const char* label, const TwoModeState& state, const ChannelPair& channels, int reps) {
    TwoModeDensityMatrix serial{state.cutoff, Eigen::MatrixXcd(), 0.0};
    TwoModeDensityMatrix parallel{state.cutoff, Eigen::MatrixXcd(), 0.0};
    const double ts = time_call(state, channels, reps, &general_output_serial, serial);
    const double tp = time_call(state, channels, reps, &general_output, parallel);
    const double diff = (serial.elements - parallel.elements).cwiseAbs().maxCoeff();
    std::printf("%-18s serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx   max|diff| %.3e\n",
                label, 1e3 * ts, 1e3 * tp, ts / tp, diff);
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 10;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

    const ChannelPair channels{MediumProfile::constant(0.2, 1.0),
                               MediumProfile::constant(0.2, 0.5)};
    std::printf("cutoff %d, %d repetitions, %d thread(s)\n", n, reps, omp_get_max_threads());

    const EnsembleSpec spec{Distribution::SphereUniform, PhotonCutoff(n), 1, 42, {}};
    report("dense random", sample_state(spec, 0), channels, reps);
    report("two-amplitude", noon_state(n), channels, reps);
    return 0;
}
