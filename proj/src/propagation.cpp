#include "lossprop/propagation.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace lossprop {

namespace {

// Integer powers; base^0 == 1 even for base == 0 (the zero-depth limit).
double pow_int(double base, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

// Everything the kernels need from one channel at one distance.
struct ChannelFactors {
    double depth;      // integral of mu over [0, x]
    double phase;      // integral of eta over [0, x]
    double depletion;  // 1 - exp(-depth), formed via expm1 for small depths
    std::vector<double> half_decay;    // exp(-0.5 k depth), k = 0 .. 2 n_max
    std::vector<double> depletion_pow; // depletion^j, j = 0 .. n_max
    std::vector<cxd> phase_factor;     // exp(i d phase), d = -n_max .. n_max
};

ChannelFactors channel_factors(const MediumProfile& profile, double x, int n_max) {
    ChannelFactors f;
    f.depth = profile.optical_depth(x);
    f.phase = profile.accumulated_phase(x);
    f.depletion = -std::expm1(-f.depth);
    f.half_decay.resize(2 * n_max + 1);
    for (int k = 0; k <= 2 * n_max; ++k) f.half_decay[k] = std::exp(-0.5 * k * f.depth);
    f.depletion_pow.resize(n_max + 1);
    f.depletion_pow[0] = 1.0;
    for (int j = 1; j <= n_max; ++j) f.depletion_pow[j] = f.depletion_pow[j - 1] * f.depletion;
    f.phase_factor.resize(2 * n_max + 1);
    for (int d = -n_max; d <= n_max; ++d)
        f.phase_factor[d + n_max] = std::polar(1.0, double(d) * f.phase);
    return f;
}

// Per-mode thinning weight connecting the surviving occupation pair (p, p') to
// the input level l (the partner level is l + p' - p):
//   depletion^{l-p} / (l-p)! * sqrt(l! (l+p'-p)! / (p! p'!))
// The square root is formed in log space so large factorial quotients never
// overflow.
double thinning_weight(const CombinatoricsTable& table, int l, int p, int pp, double depletion) {
    const int lp = l + pp - p;  // partner input level
    const double log_mag = 0.5 * (table.log_factorial(l) + table.log_factorial(lp) -
                                  table.log_factorial(p) - table.log_factorial(pp)) -
                           table.log_factorial(l - p);
    return std::exp(log_mag) * pow_int(depletion, l - p);
}

void symmetrize(TwoModeDensityMatrix& rho) {
    rho.hermiticity_defect = (rho.elements - rho.elements.adjoint()).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd sym = 0.5 * (rho.elements + rho.elements.adjoint());
    rho.elements = std::move(sym);
}

}  // namespace

SingleModeDensityMatrix single_mode_output(int n, const MediumProfile& profile, double x) {
    PhotonCutoff cutoff(n);
    const double depth = profile.optical_depth(x);
    const double survival = std::exp(-depth);
    const double depletion = -std::expm1(-depth);
    CombinatoricsTable table(n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.dim(), cutoff.dim());
    for (int k = 0; k <= n; ++k)
        rho(k, k) = double(table.binomial(n, k)) * pow_int(survival, k) * pow_int(depletion, n - k);
    return SingleModeDensityMatrix{cutoff, std::move(rho)};
}

TwoModeDensityMatrix noon_output(int n, const ChannelPair& channels, double x) {
    if (n < 1 || n > kMaxPhotonCutoff)
        throw CutoffExceeded("photon pair count must be in [1, 30], got " + std::to_string(n));
    PhotonCutoff cutoff(n);
    const double depth_a = channels.a.optical_depth(x);
    const double depth_b = channels.b.optical_depth(x);
    const double phase_a = channels.a.accumulated_phase(x);
    const double phase_b = channels.b.accumulated_phase(x);
    const double surv_a = std::exp(-depth_a), depl_a = -std::expm1(-depth_a);
    const double surv_b = std::exp(-depth_b), depl_b = -std::expm1(-depth_b);
    CombinatoricsTable table(n);

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff.pair_dim(), cutoff.pair_dim());
    // Two binomial diagonal blocks, one per branch; the vacuum element takes
    // contributions from both.
    for (int k = 0; k <= n; ++k) {
        const double c = 0.5 * double(table.binomial(n, k));
        rho(flatten(cutoff, k, 0), flatten(cutoff, k, 0)) += c * pow_int(surv_a, k) * pow_int(depl_a, n - k);
        rho(flatten(cutoff, 0, k), flatten(cutoff, 0, k)) += c * pow_int(surv_b, k) * pow_int(depl_b, n - k);
    }
    // The single surviving coherence pair.
    const cxd coherence =
        0.5 * std::exp(-0.5 * n * (depth_a + depth_b)) * std::polar(1.0, n * (phase_a - phase_b));
    rho(flatten(cutoff, n, 0), flatten(cutoff, 0, n)) = coherence;
    rho(flatten(cutoff, 0, n), flatten(cutoff, n, 0)) = std::conj(coherence);
    return TwoModeDensityMatrix{cutoff, std::move(rho), 0.0};
}

TwoModeDensityMatrix general_output(const TwoModeState& state, const ChannelPair& channels,
                                    const PropagationPoint& point) {
    const int n_max = state.cutoff.n_max;
    const int dim = n_max + 1;
    const ChannelFactors fa = channel_factors(channels.a, point.x_a, n_max);
    const ChannelFactors fb = channel_factors(channels.b, point.x_b, n_max);
    const CombinatoricsTable table(n_max);

    // Thinning weights for every surviving pair, indexed [p*dim + p'][l - p].
    std::vector<std::vector<double>> wa(dim * dim), wb(dim * dim);
    for (int p = 0; p < dim; ++p)
        for (int pp = 0; pp < dim; ++pp) {
            const int l_hi = std::min(n_max, n_max - (pp - p));
            auto& va = wa[p * dim + pp];
            auto& vb = wb[p * dim + pp];
            va.reserve(l_hi - p + 1);
            vb.reserve(l_hi - p + 1);
            for (int l = p; l <= l_hi; ++l) {
                va.push_back(thinning_weight(table, l, p, pp, fa.depletion));
                vb.push_back(thinning_weight(table, l, p, pp, fb.depletion));
            }
        }

    // Coefficient pairs with a non-vanishing product, grouped by the index
    // offset (dp, dq) they feed.  Sparse inputs (e.g. two-amplitude
    // superpositions) leave most groups empty.
    const int width = 2 * n_max + 1;
    std::vector<std::vector<std::pair<int, int>>> pairs(width * width);
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m < dim; ++m) {
            if (state.alpha(l, m) == cxd(0.0, 0.0)) continue;
            for (int lp = 0; lp < dim; ++lp)
                for (int mp = 0; mp < dim; ++mp) {
                    if (state.alpha(lp, mp) == cxd(0.0, 0.0)) continue;
                    pairs[(lp - l + n_max) * width + (mp - m + n_max)].emplace_back(l, m);
                }
        }

    TwoModeDensityMatrix rho{state.cutoff,
                             Eigen::MatrixXcd(state.cutoff.pair_dim(), state.cutoff.pair_dim()),
                             0.0};
    Eigen::MatrixXcd& out = rho.elements;

#pragma omp parallel for collapse(2) schedule(static)
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
            const int row = p * dim + q;
            for (int pp = 0; pp < dim; ++pp) {
                const int dp = pp - p;
                const auto& wap = wa[p * dim + pp];
                for (int qq = 0; qq < dim; ++qq) {
                    const int dq = qq - q;
                    const auto& wbq = wb[q * dim + qq];
                    cxd acc(0.0, 0.0);
                    for (const auto& [l, m] : pairs[(dp + n_max) * width + (dq + n_max)]) {
                        if (l < p || m < q) continue;
                        acc += state.alpha(l, m) * std::conj(state.alpha(l + dp, m + dq)) *
                               (wap[l - p] * wbq[m - q]);
                    }
                    // element phase e^{i (p - p') Phi_a + i (q - q') Phi_b}:
                    // the survivors carry the accumulated phase
                    out(row, pp * dim + qq) =
                        acc * (fa.half_decay[p + pp] * fb.half_decay[q + qq]) *
                        (fa.phase_factor[n_max - dp] * fb.phase_factor[n_max - dq]);
                }
            }
        }

    symmetrize(rho);
    return rho;
}

TwoModeDensityMatrix general_output_serial(const TwoModeState& state, const ChannelPair& channels,
                                           const PropagationPoint& point) {
    const int n_max = state.cutoff.n_max;
    const int dim = n_max + 1;
    const CombinatoricsTable table(n_max);
    const double depth_a = channels.a.optical_depth(point.x_a);
    const double depth_b = channels.b.optical_depth(point.x_b);
    const double phase_a = channels.a.accumulated_phase(point.x_a);
    const double phase_b = channels.b.accumulated_phase(point.x_b);
    const double depl_a = -std::expm1(-depth_a);
    const double depl_b = -std::expm1(-depth_b);

    TwoModeDensityMatrix rho{state.cutoff,
                             Eigen::MatrixXcd(state.cutoff.pair_dim(), state.cutoff.pair_dim()),
                             0.0};
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
            for (int pp = 0; pp < dim; ++pp)
                for (int qq = 0; qq < dim; ++qq) {
                    const int dp = pp - p, dq = qq - q;
                    cxd acc(0.0, 0.0);
                    for (int l = p; l < dim; ++l) {
                        if (l + dp < 0 || l + dp >= dim) continue;
                        for (int m = q; m < dim; ++m) {
                            if (m + dq < 0 || m + dq >= dim) continue;
                            acc += state.alpha(l, m) * std::conj(state.alpha(l + dp, m + dq)) *
                                   (thinning_weight(table, l, p, pp, depl_a) *
                                    thinning_weight(table, m, q, qq, depl_b));
                        }
                    }
                    rho.elements(p * dim + q, pp * dim + qq) =
                        acc * std::exp(-0.5 * (p + pp) * depth_a - 0.5 * (q + qq) * depth_b) *
                        std::polar(1.0, (p - pp) * phase_a + (q - qq) * phase_b);
                }

    symmetrize(rho);
    return rho;
}

namespace detail {

cxd form_a_term(const TwoModeState& state, const CombinatoricsTable& table, int l, int m, int lp,
                int mp, int p, int q, double depth_a, double depth_b, double phase_a,
                double phase_b) {
    const int n_max = state.cutoff.n_max;
    if (l < 0 || m < 0 || lp < 0 || mp < 0 || l > n_max || m > n_max || lp > n_max || mp > n_max)
        return cxd(0.0, 0.0);
    // Terms demanding the factorial of a negative integer vanish identically.
    if (p < 0 || q < 0 || p > l || q > m || p + lp - l < 0 || q + mp - m < 0) return cxd(0.0, 0.0);

    const int r = p + lp - l;  // output column occupation, mode a
    const int c = q + mp - m;  // output column occupation, mode b
    const double depl_a = -std::expm1(-depth_a);
    const double depl_b = -std::expm1(-depth_b);
    // Decay exponents combined before exponentiation: p + (lp - l)/2 >= 0
    // whenever the term survives the guards, so the argument never overflows.
    const double log_mag = -(p + 0.5 * (lp - l)) * depth_a - (q + 0.5 * (mp - m)) * depth_b +
                           0.5 * (table.log_factorial(l) + table.log_factorial(lp) +
                                  table.log_factorial(m) + table.log_factorial(mp) -
                                  table.log_factorial(p) - table.log_factorial(q) -
                                  table.log_factorial(r) - table.log_factorial(c)) -
                           table.log_factorial(l - p) - table.log_factorial(m - q);
    const double mag = std::exp(log_mag) * pow_int(depl_a, l - p) * pow_int(depl_b, m - q);
    return state.alpha(l, m) * std::conj(state.alpha(lp, mp)) * mag *
           std::polar(1.0, (l - lp) * phase_a + (m - mp) * phase_b);
}

}  // namespace detail

TwoModeDensityMatrix general_output_form_a(const TwoModeState& state, const ChannelPair& channels,
                                           const PropagationPoint& point) {
    const int n_max = state.cutoff.n_max;
    const int dim = n_max + 1;
    const CombinatoricsTable table(n_max);
    const double depth_a = channels.a.optical_depth(point.x_a);
    const double depth_b = channels.b.optical_depth(point.x_b);
    const double phase_a = channels.a.accumulated_phase(point.x_a);
    const double phase_b = channels.b.accumulated_phase(point.x_b);

    TwoModeDensityMatrix rho{state.cutoff,
                             Eigen::MatrixXcd::Zero(state.cutoff.pair_dim(), state.cutoff.pair_dim()),
                             0.0};
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m < dim; ++m) {
            if (state.alpha(l, m) == cxd(0.0, 0.0)) continue;
            for (int lp = 0; lp < dim; ++lp)
                for (int mp = 0; mp < dim; ++mp) {
                    if (state.alpha(lp, mp) == cxd(0.0, 0.0)) continue;
                    for (int p = 0; p <= l; ++p) {
                        const int r = p + lp - l;
                        if (r < 0) continue;  // vanishing term (negative factorial)
                        for (int q = 0; q <= m; ++q) {
                            const int c = q + mp - m;
                            if (c < 0) continue;
                            rho.elements(flatten(state.cutoff, p, q), flatten(state.cutoff, r, c)) +=
                                detail::form_a_term(state, table, l, m, lp, mp, p, q, depth_a,
                                                    depth_b, phase_a, phase_b);
                        }
                    }
                }
        }

    symmetrize(rho);
    return rho;
}

}  // namespace lossprop
