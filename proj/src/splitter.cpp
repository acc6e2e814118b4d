#include "lossprop/splitter.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "lossprop/combinatorics.hpp"

namespace lossprop {

namespace {

cxd cpow_int(cxd base, int k) {
    cxd r(1.0, 0.0);
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

double pow_int(double base, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

Eigen::MatrixXcd kron_mode_a(const Eigen::MatrixXcd& op, int dim) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (int p = 0; p < dim; ++p)
        for (int pp = 0; pp < dim; ++pp) {
            if (op(p, pp) == cxd(0.0, 0.0)) continue;
            for (int q = 0; q < dim; ++q) out(p * dim + q, pp * dim + q) = op(p, pp);
        }
    return out;
}

Eigen::MatrixXcd kron_mode_b(const Eigen::MatrixXcd& op, int dim) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (int q = 0; q < dim; ++q)
        for (int qq = 0; qq < dim; ++qq) {
            if (op(q, qq) == cxd(0.0, 0.0)) continue;
            for (int p = 0; p < dim; ++p) out(p * dim + q, p * dim + qq) = op(q, qq);
        }
    return out;
}

}  // namespace

SplitterChain make_chain(int m, double loss_fraction, double phase) {
    if (m < 1) throw std::invalid_argument("chain needs at least one splitter, got " + std::to_string(m));
    if (!(loss_fraction > 0.0) || !(loss_fraction < 1.0))
        throw InvalidLossFraction("per-splitter loss fraction must lie in (0, 1), got " +
                                  std::to_string(loss_fraction));
    const cxd rot = std::polar(1.0, phase);
    return SplitterChain{m, std::sqrt(1.0 - loss_fraction) * rot,
                         cxd(0.0, 1.0) * std::sqrt(loss_fraction) * rot};
}

TransferMatrix build_transfer_matrix(const SplitterChain& chain) {
    const int m = chain.m_count;
    if (m < 0) throw std::invalid_argument("negative splitter count");
    const cxd t = chain.transmission, l = chain.reflection;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    u(0, 0) = cpow_int(t, m);
    for (int j = 1; j <= m; ++j) u(0, j) = l * cpow_int(t, j - 1);
    for (int i = 1; i <= m; ++i) {
        u(i, 0) = l * cpow_int(t, m - i);
        u(i, i) = t;
        for (int j = i + 1; j <= m; ++j) u(i, j) = l * l * cpow_int(t, j - i - 1);
    }
    return TransferMatrix{std::move(u)};
}

SingleModeDensityMatrix finite_m_single_mode_output(int n, const SplitterChain& chain) {
    PhotonCutoff cutoff(n);
    const double survival = std::pow(std::norm(chain.transmission), chain.m_count);
    const double depletion = 1.0 - survival;
    CombinatoricsTable table(n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.dim(), cutoff.dim());
    for (int k = 0; k <= n; ++k)
        rho(k, k) = double(table.binomial(n, k)) * pow_int(survival, k) * pow_int(depletion, n - k);
    return SingleModeDensityMatrix{cutoff, std::move(rho)};
}

SingleModeDensityMatrix enumerated_single_mode_output(int n, const SplitterChain& chain) {
    if (n > 4 || chain.m_count > 8)
        throw std::invalid_argument("literal enumeration is restricted to n <= 4, M <= 8");
    PhotonCutoff cutoff(n);
    const int m = chain.m_count;
    const double t2 = std::norm(chain.transmission);
    const double l2 = std::norm(chain.reflection);

    auto factorial = [](int v) {
        std::int64_t r = 1;
        for (int i = 2; i <= v; ++i) r *= i;
        return r;
    };

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.dim(), cutoff.dim());
    for (int n0 = 0; n0 <= n; ++n0) {
        const int lost = n - n0;
        double population = 0.0;
        // Walk every distribution (n_1, ..., n_M) of the lost photons over the
        // scatter ports; `weighted` carries the partial multinomial weight and
        // the |T|^2-per-port attenuation picked up so far.
        std::vector<int> occ(m, 0);
        std::function<void(int, int)> walk = [&](int port, int remaining) {
            if (port == m) {
                if (remaining != 0) return;
                double w = double(factorial(n)) / double(factorial(n0));
                for (int i = 0; i < m; ++i) {
                    w /= double(factorial(occ[i]));
                    w *= pow_int(t2, i * occ[i]) * pow_int(l2, occ[i]);
                }
                population += w * pow_int(t2, n0 * m);
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                occ[port] = k;
                walk(port + 1, remaining - k);
            }
            occ[port] = 0;
        };
        walk(0, lost);
        rho(n0, n0) = population;
    }
    return SingleModeDensityMatrix{cutoff, std::move(rho)};
}

KrausChannel single_splitter_kraus(const PhotonCutoff& cutoff, cxd transmission) {
    const double t_mag = std::abs(transmission);
    if (t_mag > 1.0 + 1e-12)
        throw InvalidLossFraction("splitter transmission magnitude must be <= 1, got " +
                                  std::to_string(t_mag));
    const cxd reflection =
        cxd(0.0, 1.0) * std::sqrt(std::max(0.0, 1.0 - std::norm(transmission))) *
        std::polar(1.0, std::arg(transmission));
    CombinatoricsTable table(cutoff.n_max);

    KrausChannel channel{cutoff, {}};
    channel.operators.reserve(cutoff.dim());
    for (int k = 0; k <= cutoff.n_max; ++k) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff.dim(), cutoff.dim());
        for (int n = k; n <= cutoff.n_max; ++n)
            a(n - k, n) = std::sqrt(double(table.binomial(n, k))) * cpow_int(transmission, n - k) *
                          cpow_int(reflection, k);
        channel.operators.push_back(std::move(a));
    }
    return channel;
}

SingleModeDensityMatrix iterate_channel(const SingleModeDensityMatrix& rho,
                                        const KrausChannel& channel, int times) {
    if (times < 0) throw std::invalid_argument("iteration count must be >= 0");
    if (!(rho.cutoff == channel.cutoff))
        throw DimensionMismatch("channel cutoff " + std::to_string(channel.cutoff.n_max) +
                                " does not match state cutoff " + std::to_string(rho.cutoff.n_max));
    SingleModeDensityMatrix out = rho;
    Eigen::MatrixXcd next(rho.cutoff.dim(), rho.cutoff.dim());
    for (int step = 0; step < times; ++step) {
        next.setZero();
        for (const auto& a : channel.operators) next += a * out.elements * a.adjoint();
        out.elements = next;
    }
    return out;
}

TwoModeDensityMatrix finite_m_two_mode_output(const TwoModeState& state,
                                              const SplitterChain& chain_a,
                                              const SplitterChain& chain_b) {
    if (chain_a.m_count < 0 || chain_b.m_count < 0)
        throw std::invalid_argument("negative splitter count");
    const int dim = state.cutoff.dim();
    TwoModeDensityMatrix rho = pure_density_matrix(state);

    const auto apply = [&](const SplitterChain& chain, bool mode_a) {
        if (chain.m_count == 0) return;  // degenerate empty chain: identity channel
        const KrausChannel kraus = single_splitter_kraus(state.cutoff, chain.transmission);
        std::vector<Eigen::MatrixXcd> lifted;
        lifted.reserve(kraus.operators.size());
        for (const auto& op : kraus.operators)
            lifted.push_back(mode_a ? kron_mode_a(op, dim) : kron_mode_b(op, dim));
        Eigen::MatrixXcd next(rho.elements.rows(), rho.elements.cols());
        for (int step = 0; step < chain.m_count; ++step) {
            next.setZero();
            for (const auto& a : lifted) next += a * rho.elements * a.adjoint();
            rho.elements = next;
        }
    };
    apply(chain_a, true);
    apply(chain_b, false);
    return rho;
}

}  // namespace lossprop
