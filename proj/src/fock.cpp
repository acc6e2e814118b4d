#include "lossprop/fock.hpp"

#include <cmath>
#include <string>

namespace lossprop {

namespace {

// Norm deviations beyond this are reported via was_rescaled.
constexpr double kNormTolerance = 1e-12;

}  // namespace

TwoModeState make_two_mode_state(const PhotonCutoff& cutoff, const Eigen::MatrixXcd& alpha) {
    if (alpha.rows() != cutoff.dim() || alpha.cols() != cutoff.dim())
        throw DimensionMismatch("amplitude grid is " + std::to_string(alpha.rows()) + "x" +
                                std::to_string(alpha.cols()) + ", cutoff wants " +
                                std::to_string(cutoff.dim()) + "x" + std::to_string(cutoff.dim()));
    const double norm = alpha.norm();
    if (norm == 0.0) throw AllZeroAmplitudes("all two-mode amplitudes are zero");
    TwoModeState state{cutoff, alpha / norm, std::abs(norm - 1.0) > kNormTolerance};
    return state;
}

SingleModeState make_single_mode_state(const PhotonCutoff& cutoff,
                                       const Eigen::VectorXcd& amplitudes) {
    if (amplitudes.size() != cutoff.dim())
        throw DimensionMismatch("amplitude vector has length " + std::to_string(amplitudes.size()) +
                                ", cutoff wants " + std::to_string(cutoff.dim()));
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw AllZeroAmplitudes("all single-mode amplitudes are zero");
    return SingleModeState{cutoff, amplitudes / norm, std::abs(norm - 1.0) > kNormTolerance};
}

TwoModeState noon_state(int n) {
    if (n < 1 || n > kMaxPhotonCutoff)
        throw CutoffExceeded("photon pair count must be in [1, 30], got " + std::to_string(n) +
                             (n == 0 ? " (the degenerate case is the vacuum)" : ""));
    PhotonCutoff cutoff(n);
    Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(cutoff.dim(), cutoff.dim());
    alpha(n, 0) = 1.0 / std::sqrt(2.0);
    alpha(0, n) = 1.0 / std::sqrt(2.0);
    return TwoModeState{cutoff, alpha, false};
}

TwoModeDensityMatrix pure_density_matrix(const TwoModeState& state) {
    const int pdim = state.cutoff.pair_dim();
    Eigen::VectorXcd psi(pdim);
    for (int l = 0; l <= state.cutoff.n_max; ++l)
        for (int m = 0; m <= state.cutoff.n_max; ++m)
            psi(flatten(state.cutoff, l, m)) = state.alpha(l, m);
    TwoModeDensityMatrix rho{state.cutoff, psi * psi.adjoint(), 0.0};
    return rho;
}

SingleModeDensityMatrix pure_density_matrix(const SingleModeState& state) {
    return SingleModeDensityMatrix{state.cutoff, state.amplitudes * state.amplitudes.adjoint()};
}

}  // namespace lossprop
