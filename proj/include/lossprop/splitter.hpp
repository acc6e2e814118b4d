#pragma once

#include <vector>

#include "lossprop/fock.hpp"

namespace lossprop {

// A series of M identical beam splitters, each with complex transmission T and
// reflection L obeying |L|^2 + |T|^2 = 1 and L*conj(T) + T*conj(L) = 0.
// m_count = 0 is permitted as the degenerate empty chain (identity channel);
// make_chain, the validated constructor, requires m_count >= 1.
struct SplitterChain {
    int m_count;
    cxd transmission;  // T
    cxd reflection;    // L
};

// Builds a chain of m splitters with per-splitter loss fraction |L|^2 = f and
// per-splitter phase arg(T) = phase:  T = sqrt(1-f) e^{i phase},
// L = i sqrt(f) e^{i phase}.  The relative factor i satisfies the second
// unitarity condition for any f and phase.
// Throws InvalidLossFraction unless 0 < f < 1.
SplitterChain make_chain(int m, double loss_fraction, double phase);

// The (M+1) x (M+1) matrix mapping the input-side creation operator and the
// M scatter-port operators to the output side:
//   row 0:    (T^M, L, LT, LT^2, ..., LT^{M-1})
//   column 0: (T^M, LT^{M-1}, ..., LT, L)
//   diagonal: T for rows 1..M, L^2 T^{j-i-1} above it, zeros below.
// Unitary for every valid (T, L).
struct TransferMatrix {
    Eigen::MatrixXcd u;
};

TransferMatrix build_transfer_matrix(const SplitterChain& chain);

// Exact output of the chain on the n-photon Fock input, traced over all
// scatter ports: diagonal with binomial populations at survival |T|^{2M}.
// (The multinomial sum over scatter-port occupations collapses to this by the
// geometric series |L|^2 (1 + |T|^2 + ... + |T|^{2(M-1)}) = 1 - |T|^{2M}.)
SingleModeDensityMatrix finite_m_single_mode_output(int n, const SplitterChain& chain);

// Literal third oracle: enumerates every composition of the lost photons over
// the M scatter ports and sums the multinomial weights directly.  Exponential
// in M, so restricted to n <= 4 and m_count <= 8; used only to validate the
// closed form above.
SingleModeDensityMatrix enumerated_single_mode_output(int n, const SplitterChain& chain);

// Kraus decomposition of a single splitter on one mode, truncated at the
// cutoff:  <n-k| A_k |n> = sqrt(C(n, k)) T^{n-k} L^k with L = i sqrt(1-|T|^2)
// e^{i arg T}.  Satisfies sum_k A_k^dagger A_k = I exactly on the truncated
// space.  Requires |T| <= 1.
struct KrausChannel {
    PhotonCutoff cutoff;
    std::vector<Eigen::MatrixXcd> operators;
};

KrausChannel single_splitter_kraus(const PhotonCutoff& cutoff, cxd transmission);

// Applies rho -> sum_k A_k rho A_k^dagger the given number of times
// (times = 0 returns the input unchanged).
SingleModeDensityMatrix iterate_channel(const SingleModeDensityMatrix& rho,
                                        const KrausChannel& channel, int times);

// Finite-M oracle for the two-mode problem: applies the single-splitter Kraus
// channel of chain_a to mode a m_count(a) times and likewise for mode b.  The
// two mode channels commute, so they are applied sequentially.  Converges to
// general_output at matched optical depth and phase with error O(1/M).
TwoModeDensityMatrix finite_m_two_mode_output(const TwoModeState& state,
                                              const SplitterChain& chain_a,
                                              const SplitterChain& chain_b);

}  // namespace lossprop
