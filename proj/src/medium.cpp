#include "lossprop/medium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lossprop {

namespace {

void require_finite_rate(double mu, double eta) {
    if (!std::isfinite(mu) || !std::isfinite(eta))
        throw OutOfDomain("medium rates must be finite");
    if (mu < 0.0) throw OutOfDomain("extinction coefficient must be >= 0, got " + std::to_string(mu));
}

}  // namespace

MediumProfile MediumProfile::constant(double mu, double eta) {
    require_finite_rate(mu, eta);
    MediumProfile p;
    p.rep_ = Constant{mu, eta};
    return p;
}

MediumProfile MediumProfile::piecewise(std::vector<ProfileSegment> segments) {
    if (segments.empty()) throw OutOfDomain("piecewise profile needs at least one segment");
    double prev = 0.0;
    Piecewise pw;
    pw.depth_at_boundary.reserve(segments.size());
    pw.phase_at_boundary.reserve(segments.size());
    double depth = 0.0, phase = 0.0;
    for (const auto& seg : segments) {
        require_finite_rate(seg.mu, seg.eta);
        if (!(seg.until_km > prev))
            throw OutOfDomain("segment boundaries must be strictly increasing and positive");
        depth += seg.mu * (seg.until_km - prev);
        phase += seg.eta * (seg.until_km - prev);
        pw.depth_at_boundary.push_back(depth);
        pw.phase_at_boundary.push_back(phase);
        prev = seg.until_km;
    }
    pw.segments = std::move(segments);
    MediumProfile p;
    p.rep_ = std::move(pw);
    return p;
}

MediumProfile MediumProfile::tabulated(std::vector<ProfileSample> samples) {
    if (samples.size() < 2) throw OutOfDomain("tabulated profile needs at least two samples");
    if (samples.front().zeta_km != 0.0)
        throw OutOfDomain("tabulated profile must start at zeta = 0");
    Tabulated tab;
    tab.depth_at_sample.resize(samples.size());
    tab.phase_at_sample.resize(samples.size());
    tab.depth_at_sample[0] = 0.0;
    tab.phase_at_sample[0] = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require_finite_rate(samples[i].mu, samples[i].eta);
        if (i == 0) continue;
        const double h = samples[i].zeta_km - samples[i - 1].zeta_km;
        if (!(h > 0.0)) throw OutOfDomain("tabulated abscissae must be strictly increasing");
        // Trapezoid panel: exact for the linear interpolant between samples.
        tab.depth_at_sample[i] =
            tab.depth_at_sample[i - 1] + 0.5 * h * (samples[i].mu + samples[i - 1].mu);
        tab.phase_at_sample[i] =
            tab.phase_at_sample[i - 1] + 0.5 * h * (samples[i].eta + samples[i - 1].eta);
    }
    tab.samples = std::move(samples);
    MediumProfile p;
    p.rep_ = std::move(tab);
    return p;
}

MediumProfile MediumProfile::sampled(const std::function<double(double)>& mu,
                                     const std::function<double(double)>& eta, double x_max,
                                     double panels_per_km) {
    if (!(x_max > 0.0)) throw OutOfDomain("sampled profile needs x_max > 0");
    if (!(panels_per_km > 0.0)) throw OutOfDomain("panel density must be positive");
    const int panels = std::max(1, int(std::ceil(panels_per_km * x_max)));
    std::vector<ProfileSample> samples(panels + 1);
    for (int i = 0; i <= panels; ++i) {
        const double z = x_max * double(i) / double(panels);
        samples[i] = ProfileSample{z, mu(z), eta(z)};
    }
    samples.front().zeta_km = 0.0;
    return tabulated(std::move(samples));
}

void MediumProfile::check_distance(double x, double domain_end) const {
    if (!(x >= 0.0)) throw OutOfDomain("propagation distance must be >= 0, got " + std::to_string(x));
    if (x > domain_end)
        throw OutOfDomain("distance " + std::to_string(x) + " beyond profile domain end " +
                          std::to_string(domain_end));
}

double MediumProfile::optical_depth(double x) const {
    if (const auto* c = std::get_if<Constant>(&rep_)) {
        if (!(x >= 0.0)) throw OutOfDomain("propagation distance must be >= 0");
        return c->mu * x;
    }
    if (const auto* pw = std::get_if<Piecewise>(&rep_)) {
        check_distance(x, pw->segments.back().until_km);
        std::size_t i = 0;
        double start = 0.0, base = 0.0;
        while (x > pw->segments[i].until_km) {
            base = pw->depth_at_boundary[i];
            start = pw->segments[i].until_km;
            ++i;
        }
        return base + pw->segments[i].mu * (x - start);
    }
    const auto& tab = std::get<Tabulated>(rep_);
    check_distance(x, tab.samples.back().zeta_km);
    const auto it = std::upper_bound(tab.samples.begin(), tab.samples.end(), x,
                                     [](double v, const ProfileSample& s) { return v < s.zeta_km; });
    const std::size_t i = std::min<std::size_t>(it - tab.samples.begin(), tab.samples.size() - 1) - 1;
    const auto& s0 = tab.samples[i];
    const auto& s1 = tab.samples[i + 1];
    const double t = (x - s0.zeta_km) / (s1.zeta_km - s0.zeta_km);
    const double mu_x = s0.mu + t * (s1.mu - s0.mu);
    return tab.depth_at_sample[i] + 0.5 * (x - s0.zeta_km) * (s0.mu + mu_x);
}

double MediumProfile::accumulated_phase(double x) const {
    if (const auto* c = std::get_if<Constant>(&rep_)) {
        if (!(x >= 0.0)) throw OutOfDomain("propagation distance must be >= 0");
        return c->eta * x;
    }
    if (const auto* pw = std::get_if<Piecewise>(&rep_)) {
        check_distance(x, pw->segments.back().until_km);
        std::size_t i = 0;
        double start = 0.0, base = 0.0;
        while (x > pw->segments[i].until_km) {
            base = pw->phase_at_boundary[i];
            start = pw->segments[i].until_km;
            ++i;
        }
        return base + pw->segments[i].eta * (x - start);
    }
    const auto& tab = std::get<Tabulated>(rep_);
    check_distance(x, tab.samples.back().zeta_km);
    const auto it = std::upper_bound(tab.samples.begin(), tab.samples.end(), x,
                                     [](double v, const ProfileSample& s) { return v < s.zeta_km; });
    const std::size_t i = std::min<std::size_t>(it - tab.samples.begin(), tab.samples.size() - 1) - 1;
    const auto& s0 = tab.samples[i];
    const auto& s1 = tab.samples[i + 1];
    const double t = (x - s0.zeta_km) / (s1.zeta_km - s0.zeta_km);
    const double eta_x = s0.eta + t * (s1.eta - s0.eta);
    return tab.phase_at_sample[i] + 0.5 * (x - s0.zeta_km) * (s0.eta + eta_x);
}

}  // namespace lossprop
