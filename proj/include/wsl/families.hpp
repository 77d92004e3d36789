#pragma once

#include <optional>
#include <vector>

#include "wsl/warping.hpp"

namespace wsl {

/// Round sphere of the given radius: f(s) = radius * sin(s / radius) on
/// [0, pi * radius]. The calibration family.
WarpingFunction round_sphere(double radius, Eigen::Index grid = kDefaultGrid);

/// Collapsing family: f_j(s) = 1/(2j+2) - (1-s)^{2j+2}/(2j+2) on [0, 2].
/// Nonnegative scalar curvature, minimal-sphere areas shrinking to zero.
WarpingFunction collapsing_family(int j, Eigen::Index grid = kDefaultGrid);

/// c * sin(s) on [0, pi]; handy for scaled-sphere comparison sequences.
WarpingFunction scaled_sine(double c, Eigen::Index grid = kDefaultGrid);

struct LakzianParams {
    double delta = 0.1;      // spline width parameter, in (0, 1)
    double L_spline = 1.0;   // target spline length
    Eigen::Index grid = 8192;
};

/// A sphere-with-spline profile built from a Hawking-mass prescription:
/// m(r) = r(1-eps^2)/2 below delta^3, r^3/2 above delta, and a smooth
/// monotone blend in between; the profile is the arclength chart of
/// (1 + z'(sin rho)^2) cos^2(rho) drho^2 + sin^2(rho) g_{S^2} glued to a
/// round hemisphere.
struct LakzianProfile {
    LakzianParams params;
    double epsilon = 0.0;      // solves delta^3 sqrt((1-eps^2)/eps^2) = L
    double arm_end_s = 0.0;    // end of the linear spline arm
    double blend_end_s = 0.0;  // end of the Hawking-mass blend zone
    double equator_s = 0.0;    // location of the f = 1 equator
    WarpingFunction warping;

    double hawking_mass(double r) const;
    double z_prime(double r) const;
};

LakzianProfile lakzian_family(const LakzianParams& p);

/// User-supplied profile: explicit samples or an expression in `s`.
struct CustomSpec {
    std::optional<std::vector<double>> samples;
    std::optional<std::string> expression;
    double domain_end = 0.0;
    Eigen::Index grid = kDefaultGrid;
    double smooth_radius = 0.0;  // mollification radius (0 = off)
    bool strict = true;          // throw on endpoint/positivity violations
};

WarpingFunction custom_profile(const CustomSpec& spec);

/// Mollify samples with a compact quartic kernel; endpoints are preserved by
/// odd reflection, so linear ramps at the ends stay exact.
GridFunction mollify(const GridFunction& g, double radius);

}  // namespace wsl
