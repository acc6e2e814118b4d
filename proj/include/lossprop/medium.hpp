#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "lossprop/errors.hpp"

namespace lossprop {

// One segment of a piecewise-constant medium: extinction mu and phase rate eta
// apply from the previous boundary up to `until_km`.
struct ProfileSegment {
    double until_km;
    double mu;   // extinction coefficient, km^-1, >= 0
    double eta;  // phase rotation rate, km^-1, any sign
};

// One sample of a tabulated medium; values between samples are interpolated
// linearly, so integrals reduce to the trapezoid rule on the sample grid.
struct ProfileSample {
    double zeta_km;
    double mu;
    double eta;
};

// Extinction / phase-rate profile of a propagation channel.  All propagation
// outputs depend on the medium only through the two integrals
//   optical_depth(x)     = integral of mu  over [0, x]
//   accumulated_phase(x) = integral of eta over [0, x]
// so this class exposes exactly those.
class MediumProfile {
  public:
    static MediumProfile constant(double mu, double eta);

    // Segments must have strictly increasing positive `until_km`; the profile
    // domain ends at the last boundary.
    static MediumProfile piecewise(std::vector<ProfileSegment> segments);

    // Samples must start at zeta = 0 with strictly increasing abscissae; the
    // domain ends at the last sample.
    static MediumProfile tabulated(std::vector<ProfileSample> samples);

    // Convenience: sample smooth rate functions onto a uniform grid over
    // [0, x_max].  The default density (1000 panels per km) keeps the trapezoid
    // error of gently varying profiles near 1e-8 relative; raise it for
    // rapidly oscillating media.
    static MediumProfile sampled(const std::function<double(double)>& mu,
                                 const std::function<double(double)>& eta, double x_max,
                                 double panels_per_km = 1000.0);

    // integral of mu over [0, x]; x must be >= 0 and inside the domain.
    double optical_depth(double x) const;

    // integral of eta over [0, x].
    double accumulated_phase(double x) const;

  private:
    struct Constant {
        double mu, eta;
    };
    struct Piecewise {
        std::vector<ProfileSegment> segments;
        std::vector<double> depth_at_boundary;  // cumulative integrals, one per segment end
        std::vector<double> phase_at_boundary;
    };
    struct Tabulated {
        std::vector<ProfileSample> samples;
        std::vector<double> depth_at_sample;
        std::vector<double> phase_at_sample;
    };

    MediumProfile() = default;
    void check_distance(double x, double domain_end) const;

    std::variant<Constant, Piecewise, Tabulated> rep_;
};

// The two independent channels feeding modes a and b.
struct ChannelPair {
    MediumProfile a;
    MediumProfile b;
};

// Per-mode propagation distances (km).
struct PropagationPoint {
    double x_a;
    double x_b;
};

}  // namespace lossprop
