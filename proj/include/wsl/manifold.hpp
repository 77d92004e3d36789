#pragma once

#include <optional>
#include <vector>

#include "wsl/warping.hpp"

namespace wsl {

/// A rotationally symmetric sphere {s = const} where the profile slope
/// vanishes (or nearly vanishes, for plateaus).
struct CriticalSphere {
    enum class Kind { interior_min, interior_max, plateau };
    double s = 0.0;
    double area = 0.0;  // 4 pi f(s)^2
    Kind kind = Kind::interior_max;
};

/// A = sup{s : f increasing on [0,s]},  B = inf{s : f decreasing on [s,L]}.
struct MonotonicityMarks {
    double A = 0.0;
    double B = 0.0;
};

/// Outcome of checking the convergence hypotheses (diameter cap, scalar
/// sign, minimal-area floor) on one manifold.
struct HypothesisVerdict {
    double D_cap = 0.0, A_floor = 0.0;
    double diameter = 0.0;
    bool diameter_ok = false;

    bool scalar_ok = false;        // min over interior grid of Scalar >= -band
    double scalar_min = 0.0;
    double scalar_argmin = 0.0;
    bool scalar_claimed = false;   // true when nonnegativity was asserted by the caller

    bool min_area_ok = false;
    double sym_min_area = 0.0;
    CriticalSphere::Kind min_area_kind = CriticalSphere::Kind::interior_max;
    bool min_area_approximate = false;  // minimum came from a plateau sphere

    double max_abs_slope = 0.0;
    bool lipschitz_consistent = true;   // scalar >= 0 (checked or claimed) forces |f'| <= 1
    bool area_diameter_consistent = true;  // A_floor / 4pi <= L^2

    bool pass() const {
        return diameter_ok && scalar_ok && min_area_ok && lipschitz_consistent &&
               area_diameter_consistent;
    }
};

/// Validation record kept by the manifold.
struct ValidationRecord {
    EndpointChecks endpoints;
    bool positive_interior = false;
    bool smooth = false;
};

/// A validated warped-product manifold: profile + cached derived scalars.
/// All queries are pure; instances are immutable and sharable.
class RotSymManifold {
public:
    explicit RotSymManifold(WarpingFunction warping,
                            Eigen::Index grid_resolution = kDefaultGrid);

    const WarpingFunction& warping() const { return warping_; }
    Eigen::Index grid_resolution() const { return grid_.size(); }
    const GridFunction& grid() const { return grid_; }
    const GridFunction& slope_grid() const { return d1_; }

    /// Diameter equals the domain end of the profile, exactly.
    double diameter() const { return warping_.domain_end(); }
    /// 4 pi * ||f||^2_{L^2}, composite Simpson on the manifold grid.
    double volume() const { return volume_; }
    /// Cross-check value: trapezoid quadrature at double resolution.
    double volume_trapezoid_2x() const { return volume_check_; }

    /// Pole guard: curvature formulas are refused where f <= this.
    double pole_guard() const { return tol::pos_rel * diameter(); }

    const ValidationRecord& validation() const { return validation_; }

    double f(double s) const { return warping_.eval(s); }

    /// Scalar curvature -4 f''/f + 2(1 - f'^2)/f^2.
    double scalar_curvature(double s) const;
    /// (3/4) h^{-1/3} - h'' with h = f^{3/2}; same sign as the scalar.
    double h_criterion_residual(double s) const;
    /// Mean curvature 2 f'/f of the symmetric sphere through s.
    double mean_curvature(double s) const;

    const std::vector<CriticalSphere>& critical_spheres() const { return spheres_; }
    /// Minimum area over the symmetric critical spheres; an upper bound for
    /// the true minimal-surface infimum.
    double sym_min_area() const { return sym_min_area_; }
    const CriticalSphere& min_area_sphere() const { return spheres_[min_sphere_index_]; }

    const MonotonicityMarks& monotonicity_marks() const { return marks_; }

    HypothesisVerdict validate_hypotheses(double D_cap, double A_floor,
                                          std::optional<bool> claim_scalar_nonneg = {}) const;

    /// Scalar curvature at the interior grid nodes outside the pole guard,
    /// from the nodal derivative grids; pairs (s, Scalar).
    std::vector<std::pair<double, double>> scalar_on_grid() const;
    /// Same sweep for the h-substitution residual.
    std::vector<std::pair<double, double>> h_residual_on_grid() const;

private:
    WarpingFunction warping_;
    GridFunction grid_;   // profile values on the manifold grid
    GridFunction d1_;     // nodal f'
    GridFunction d2_;     // nodal f''
    std::optional<GridFunction> h2_;  // nodal (f^{3/2})'' for finite-difference sources
    ValidationRecord validation_;
    double volume_ = 0.0, volume_check_ = 0.0;
    std::vector<CriticalSphere> spheres_;
    std::size_t min_sphere_index_ = 0;
    double sym_min_area_ = 0.0;
    MonotonicityMarks marks_;

    void detect_critical_spheres();
    void detect_marks();
    double slope_at(double s) const;
};

}  // namespace wsl
