#pragma once

#include "lossprop/combinatorics.hpp"
#include "lossprop/fock.hpp"
#include "lossprop/medium.hpp"

namespace lossprop {

// Continuum-limit channel acting on the n-photon Fock input |n><n|: the output
// is diagonal with binomial populations at survival probability
// exp(-optical_depth(x)).
SingleModeDensityMatrix single_mode_output(int n, const MediumProfile& profile, double x);

// Closed-form output for the two-mode superposition (|n,0> + |0,n>)/sqrt(2)
// after both modes travel the same distance x through their channels: two
// binomial diagonal blocks plus a single surviving coherence pair at
// (|n,0><0,n|, h.c.) with magnitude (1/2) exp(-(n/2)(D_a + D_b)) and phase
// +- n (Phi_a - Phi_b), where D and Phi are the channel integrals at x.
TwoModeDensityMatrix noon_output(int n, const ChannelPair& channels, double x);

// Continuum-limit output for an arbitrary pure two-mode input.  Production
// kernel: parallelized over output elements (OpenMP when available) and skips
// vanishing coefficient products, so sparse inputs cost far less than the
// dense worst case.  Every element is accumulated by exactly one thread in a
// fixed order, so results do not depend on the thread count.
TwoModeDensityMatrix general_output(const TwoModeState& state, const ChannelPair& channels,
                                    const PropagationPoint& point);

// Straightforward serial implementation of the same map, kept as the reference
// the parallel kernel is tested and benchmarked against.
TwoModeDensityMatrix general_output_serial(const TwoModeState& state, const ChannelPair& channels,
                                           const PropagationPoint& point);

// Independent algebraic route to the same output: the sum is organized over
// input index pairs (outer) and surviving occupations (inner) instead of
// output elements.  Used as a cross-check oracle in tests; it must agree with
// general_output elementwise to near machine precision.
TwoModeDensityMatrix general_output_form_a(const TwoModeState& state, const ChannelPair& channels,
                                           const PropagationPoint& point);

namespace detail {

// One summand of the input-pair-ordered accumulation: the contribution of the
// coefficient pair (l, m), (l', m') to the output element
// (|p, q>, <p + l' - l, q + m' - m|).  Returns exactly zero whenever an index
// combination would require the factorial of a negative integer (p > l,
// q > m, p + l' - l < 0, or q + m' - m < 0): such terms lie outside the
// physical range and drop out of the sum.
cxd form_a_term(const TwoModeState& state, const CombinatoricsTable& table, int l, int m, int lp,
                int mp, int p, int q, double depth_a, double depth_b, double phase_a,
                double phase_b);

}  // namespace detail

}  // namespace lossprop
