#pragma once

#include <utility>

#include "lossprop/fock.hpp"

namespace lossprop {

// Everything recorded per (state, distance) sample of a sweep.
struct MetricRecord {
    double x;
    double coherence_power;
    double negativity;
    double trace_error;     // |tr(rho) - 1|
    double min_eigenvalue;  // smallest eigenvalue of rho itself
    double purity;          // tr(rho^2)
};

// Sum of |rho_ij|^2 over off-diagonal elements (i != j).  Equals
// ||rho||_F^2 - sum_i |rho_ii|^2, but is accumulated directly over i != j so
// it is exactly non-negative.
double coherence_power(const TwoModeDensityMatrix& rho);

// Partial transpose over mode a: element ((p,q),(p',q')) of the result is
// rho((p',q),(p,q')).  Hermitian and trace-preserving but generally not
// positive semidefinite; a negative spectrum certifies entanglement.
Eigen::MatrixXcd partial_transpose_a(const TwoModeDensityMatrix& rho);

// Sum of |lambda| over eigenvalues of the partial transpose below
// -epsilon_eig, with epsilon_eig = 1e-12 * pair_dim to keep eigensolver noise
// on separable states from registering.  Throws EigensolverFailure when the
// dense Hermitian solve does not converge.
double negativity(const TwoModeDensityMatrix& rho);

// tr(rho^2); computed as the squared Frobenius norm (rho is Hermitian).
double purity(const TwoModeDensityMatrix& rho);
double purity(const SingleModeDensityMatrix& rho);

double trace_error(const TwoModeDensityMatrix& rho);
double trace_error(const SingleModeDensityMatrix& rho);

// Smallest eigenvalue of rho (positivity diagnostic).
double min_eigenvalue(const TwoModeDensityMatrix& rho);

// <n> of a single-mode matrix.
double mean_photon_number(const SingleModeDensityMatrix& rho);

// (<n_a>, <n_b>) of a two-mode matrix.
std::pair<double, double> mean_photon_numbers(const TwoModeDensityMatrix& rho);

// All metrics of one sample in one call (two Hermitian eigensolves: one for
// the spectrum of rho, one for its partial transpose).
MetricRecord evaluate_metrics(double x, const TwoModeDensityMatrix& rho);

}  // namespace lossprop
