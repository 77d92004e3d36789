#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "wsl/errors.hpp"

namespace wsl {

/// Default number of sample points for manifold grids.
inline constexpr Eigen::Index kDefaultGrid = 4096;

/// Uniform-grid samples of a scalar function on an interval.
///
/// The interpolation rule is shape-preserving cubic Hermite
/// (Fritsch-Carlson slopes), exact at the nodes and exact on linear data.
/// Instances are immutable after construction and safe to share across
/// threads.
class GridFunction {
public:
    GridFunction(double lo, double hi, Eigen::ArrayXd values);

    /// Sample a callable at `n` uniformly spaced nodes on [lo, hi].
    static GridFunction sample(double lo, double hi, Eigen::Index n,
                               const std::function<double(double)>& f);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double spacing() const { return spacing_; }
    Eigen::Index size() const { return values_.size(); }
    double node(Eigen::Index i) const { return lo_ + spacing_ * static_cast<double>(i); }
    const Eigen::ArrayXd& values() const { return values_; }
    double value(Eigen::Index i) const { return values_[i]; }

    double min() const { return values_.minCoeff(); }
    double max() const { return values_.maxCoeff(); }

    /// Interpolated evaluation; exact at nodes. Throws DomainError outside [lo, hi].
    double operator()(double s) const;

    /// Nodal finite-difference derivative of given order (1 or 2) as a new
    /// grid function. Fourth-order stencils throughout: centered in the
    /// interior, offset/one-sided at the four nodes nearest the ends.
    GridFunction derivative(int order) const;

    /// Pointwise transform of the sample values.
    GridFunction map(const std::function<double(double)>& fn) const;

    /// Resample onto `n` uniform nodes of [a, b] through the interpolant.
    GridFunction restricted(double a, double b, Eigen::Index n) const;

    bool same_shape(const GridFunction& other) const;

private:
    double lo_, hi_, spacing_;
    Eigen::ArrayXd values_;
    Eigen::ArrayXd slopes_;  // Fritsch-Carlson nodal slopes for the interpolant

    void build_slopes();
};

/// Composite Simpson integral over the full grid (three-eighths rule closes
/// an odd interval count). Long-double accumulation.
double integrate(const GridFunction& g);

/// Trapezoid rule over the full grid; used as an independent cross-check.
double integrate_trapezoid(const GridFunction& g);

/// Composite Simpson of a callable on [a, b] with n nodes (n >= 5).
double integrate(const std::function<double(double)>& f, double a, double b, Eigen::Index n);

/// Adaptive Simpson to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

/// Finite-difference weights for the m-th derivative at point z given
/// arbitrary nodes (Fornberg's recursion).
Eigen::ArrayXd fd_weights(double z, std::span<const double> nodes, int order);

/// Bisection refinement of a sign change of `f` on [a, b] (f(a) and f(b) of
/// opposite sign, zeros allowed on one side); returns the crossing within
/// `tol` of the true infimum of the nonpositive/nonnegative side.
double bisect_sign_change(const std::function<double(double)>& f, double a, double b,
                          double tol);

}  // namespace wsl
