#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lossprop/ensembles.hpp"

namespace lossprop {

// Least-squares slope of y against x.  Throws InsufficientData for fewer than
// two points.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

// Decay-plateau analysis of a per-distance series (typically coherence power):
//   - local log-slopes are fitted over a sliding window (default 5 points);
//   - mid_slope is the windowed slope of smallest magnitude whose window
//     center lies in the middle third of the distance range;
//   - tail_slope is a single fit over all points in the final third;
//   - plateau_flag = |mid_slope| < slope_ratio * |tail_slope|.
// Requires at least 10 points (InsufficientData otherwise); the series should
// span a few decades of decay for the slopes to be meaningful.  Non-positive
// values are clamped to the smallest positive double before taking logs, so a
// constant series yields zero slopes and no flag.
struct PlateauAnalysis {
    double mid_slope = 0.0;
    double tail_slope = 0.0;
    bool plateau_flag = false;
};

PlateauAnalysis detect_plateau(std::span<const double> x, std::span<const double> values,
                               int window = 5, double slope_ratio = 0.8);

enum class ExperimentKind { NoonDecay, EnsembleCoherence, EnsembleNegativity, OracleConvergence, SingleMode };

enum class OutputFormat { Csv, Json };

// Everything a run needs; echoed verbatim into the output metadata so a run
// can be reproduced from its artifact alone.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::NoonDecay;
    int n = 10;

    double mu_a = 0.2, mu_b = 0.2;    // km^-1
    double eta_a = 1.0, eta_b = 1.0;  // km^-1
    // Non-empty overrides the constant rates above (applied to both channels).
    std::vector<ProfileSegment> profile;

    double x_max = 5.0;
    int steps = 101;
    double x = 0.0;  // single-mode distance

    int count = 25;
    std::uint64_t seed = 1;
    Distribution distribution = Distribution::SphereUniform;
    std::vector<std::pair<int, int>> subspace;

    double depth = 1.0;                          // oracle-convergence target depth
    std::vector<int> m_values = {10, 100, 1000};  // splitter counts to compare
    bool two_mode_oracle = false;

    int plateau_window = 5;
    double plateau_ratio = 0.8;

    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
};

// Runs the experiment and writes the artifact (CSV table with `# key: value`
// metadata comments, or a JSON document with metadata / records / aggregates).
// Returns a process exit status: 0 success, 2 invalid configuration,
// 3 numerical failure, 4 I/O failure.  On failure a single-line JSON error
// record goes to stderr.
int run_experiment(const ExperimentConfig& config);

// Exit codes shared by run_experiment and the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

}  // namespace lossprop
