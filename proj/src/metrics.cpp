#include "lossprop/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lossprop {

namespace {

// Smallest eigenvalue a partial transpose may reach before it counts toward
// the negativity; scaled with the dimension to ride above eigensolver noise.
double negativity_floor(int pair_dim) { return 1e-12 * pair_dim; }

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& mat, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EigensolverFailure(std::string("Hermitian eigensolver failed on ") + what);
    return solver.eigenvalues();
}

}  // namespace

double coherence_power(const TwoModeDensityMatrix& rho) {
    const auto& m = rho.elements;
    double sum = 0.0;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (i != j) sum += std::norm(m(i, j));
    return sum;
}

Eigen::MatrixXcd partial_transpose_a(const TwoModeDensityMatrix& rho) {
    const int dim = rho.cutoff.dim();
    Eigen::MatrixXcd out(rho.elements.rows(), rho.elements.cols());
    // Transposing mode a swaps the (p, p') block indices and leaves the inner
    // (q, q') structure alone.
    for (int p = 0; p < dim; ++p)
        for (int pp = 0; pp < dim; ++pp)
            out.block(p * dim, pp * dim, dim, dim) = rho.elements.block(pp * dim, p * dim, dim, dim);
    return out;
}

double negativity(const TwoModeDensityMatrix& rho) {
    const Eigen::VectorXd evals = hermitian_eigenvalues(partial_transpose_a(rho), "partial transpose");
    const double floor = negativity_floor(rho.cutoff.pair_dim());
    double sum = 0.0;
    for (int i = 0; i < evals.size(); ++i)
        if (evals(i) < -floor) sum += -evals(i);
    return sum;
}

double purity(const TwoModeDensityMatrix& rho) { return rho.elements.squaredNorm(); }

double purity(const SingleModeDensityMatrix& rho) { return rho.elements.squaredNorm(); }

double trace_error(const TwoModeDensityMatrix& rho) {
    return std::abs(rho.elements.trace() - cxd(1.0, 0.0));
}

double trace_error(const SingleModeDensityMatrix& rho) {
    return std::abs(rho.elements.trace() - cxd(1.0, 0.0));
}

double min_eigenvalue(const TwoModeDensityMatrix& rho) {
    return hermitian_eigenvalues(rho.elements, "density matrix").minCoeff();
}

double mean_photon_number(const SingleModeDensityMatrix& rho) {
    double sum = 0.0;
    for (int n = 0; n < rho.elements.rows(); ++n) sum += n * rho.elements(n, n).real();
    return sum;
}

std::pair<double, double> mean_photon_numbers(const TwoModeDensityMatrix& rho) {
    const int dim = rho.cutoff.dim();
    double na = 0.0, nb = 0.0;
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
            const double pop = rho.elements(p * dim + q, p * dim + q).real();
            na += p * pop;
            nb += q * pop;
        }
    return {na, nb};
}

MetricRecord evaluate_metrics(double x, const TwoModeDensityMatrix& rho) {
    return MetricRecord{x,
                        coherence_power(rho),
                        negativity(rho),
                        trace_error(rho),
                        min_eigenvalue(rho),
                        purity(rho)};
}

}  // namespace lossprop
