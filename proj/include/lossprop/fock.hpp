#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "lossprop/errors.hpp"

namespace lossprop {

using cxd = std::complex<double>;

// Largest supported photon number per mode.  Density matrices grow as
// (n_max+1)^4 elements, so the cap keeps every operation comfortably dense.
inline constexpr int kMaxPhotonCutoff = 30;

// Photon-number truncation shared by states, density matrices and channels.
struct PhotonCutoff {
    int n_max;

    explicit PhotonCutoff(int n) : n_max(n) {
        if (n < 0 || n > kMaxPhotonCutoff)
            throw CutoffExceeded("photon cutoff must be in [0, 30], got " + std::to_string(n));
    }

    // Single-mode dimension n_max + 1.
    int dim() const { return n_max + 1; }
    // Two-mode (pair) dimension (n_max + 1)^2.
    int pair_dim() const { return dim() * dim(); }

    bool operator==(const PhotonCutoff& o) const { return n_max == o.n_max; }
};

// Row-major pair index: mode-a occupation is the major index.
inline int flatten(const PhotonCutoff& c, int p, int q) {
    if (p < 0 || q < 0 || p > c.n_max || q > c.n_max)
        throw IndexOutOfRange("occupation pair (" + std::to_string(p) + ", " + std::to_string(q) +
                              ") outside cutoff " + std::to_string(c.n_max));
    return p * c.dim() + q;
}

inline std::pair<int, int> unflatten(const PhotonCutoff& c, int idx) {
    if (idx < 0 || idx >= c.pair_dim())
        throw IndexOutOfRange("pair index " + std::to_string(idx) + " outside dimension " +
                              std::to_string(c.pair_dim()));
    return {idx / c.dim(), idx % c.dim()};
}

// Pure two-mode input: amplitude grid alpha(l, m) for |l>_a |m>_b, unit norm.
struct TwoModeState {
    PhotonCutoff cutoff;
    Eigen::MatrixXcd alpha;  // (n_max+1) x (n_max+1), row = mode a, col = mode b
    bool was_rescaled;       // input norm deviated from 1 by more than 1e-12
};

// Pure single-mode input used by the splitter oracles.
struct SingleModeState {
    PhotonCutoff cutoff;
    Eigen::VectorXcd amplitudes;  // length n_max+1, unit norm
    bool was_rescaled;
};

// Two-mode density matrix in the flattened pair basis.
struct TwoModeDensityMatrix {
    PhotonCutoff cutoff;
    Eigen::MatrixXcd elements;  // pair_dim x pair_dim
    // Largest |rho - rho^dagger| element seen before the final symmetrization
    // pass; zero for matrices that are Hermitian by construction.
    double hermiticity_defect = 0.0;
};

struct SingleModeDensityMatrix {
    PhotonCutoff cutoff;
    Eigen::MatrixXcd elements;  // dim x dim
};

// Normalizes an amplitude grid into a state.  Throws DimensionMismatch when the
// grid shape disagrees with the cutoff and AllZeroAmplitudes when the norm is
// exactly zero.  `was_rescaled` records whether the input norm was off by more
// than 1e-12.
TwoModeState make_two_mode_state(const PhotonCutoff& cutoff, const Eigen::MatrixXcd& alpha);

SingleModeState make_single_mode_state(const PhotonCutoff& cutoff, const Eigen::VectorXcd& amplitudes);

// (|n, 0> + |0, n>)/sqrt(2) with cutoff n.  Requires 1 <= n <= 30; n = 0 is
// rejected because the degenerate case collapses to the vacuum.
TwoModeState noon_state(int n);

// |psi><psi| in the flattened pair basis.
TwoModeDensityMatrix pure_density_matrix(const TwoModeState& state);

SingleModeDensityMatrix pure_density_matrix(const SingleModeState& state);

}  // namespace lossprop
