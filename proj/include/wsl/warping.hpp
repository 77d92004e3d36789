#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "wsl/grid_function.hpp"

namespace wsl {

enum class Representation { closed_form, sampled };
enum class DerivativeSource { analytic, finite_difference };

/// Closed-form profile with its first two derivatives.
struct ProfileField {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

/// Endpoint and positivity verdicts recorded at construction. A failed check
/// never blocks construction; downstream consumers decide how strict to be.
struct EndpointChecks {
    double f_left = 0, f_right = 0;       // f(0), f(L)
    double fp_left = 0, fp_right = 0;     // f'(0), f'(L)
    bool left_zero = false, right_zero = false;
    bool left_slope = false, right_slope = false;  // f'(0) ~ +1, f'(L) ~ -1
    bool positive_interior = false;                // f > 0 on the open interval (grid check)
    bool endpoints_ok() const { return left_zero && right_zero; }
    bool smooth() const { return endpoints_ok() && left_slope && right_slope; }
};

/// Default tolerances shared across the library.
namespace tol {
inline constexpr double endpoint = 1e-6;         // |f| at the poles
inline constexpr double endpoint_slope = 1e-3;   // |f'(0) - 1|, |f'(L) + 1| for sampled data
inline constexpr double pos_rel = 1e-6;          // pole guard: f <= pos_rel * L is "at a pole"
inline constexpr double crit = 5e-3;             // |f'| below this counts as critical/plateau
inline constexpr double scalar_rel = 1e-6;       // nonnegativity band for grid scalar checks
inline constexpr double lip = 1e-4;              // slack on the |f'| <= 1 consequence
inline constexpr double quad_rel = 1e-8;         // quadrature target on smooth profiles
inline constexpr double sign_band = 1e-6;        // |residual| band for sign-equivalence
inline constexpr double bisect_rel = 1e-10;      // critical-point refinement, relative to L
inline constexpr double cone = 0.02;             // tangent-cone difference-quotient agreement
inline constexpr double dist_rel = 1e-6;         // distributional-inequality comparison
}  // namespace tol

/// The warping profile f on [0, L]: the single source of truth for a metric
/// ds^2 + f(s)^2 g_{S^2}.
///
/// Representation is either a closed form (named family plus callables) or a
/// sampled grid with shape-preserving cubic interpolation.  Derivatives come
/// from the analytic field when one is attached, otherwise from fourth-order
/// finite differences on the grid. Immutable; cheap to copy (shared state).
class WarpingFunction {
public:
    static WarpingFunction closed_form(std::string family,
                                       std::map<std::string, double> params, ProfileField field,
                                       double domain_end, Eigen::Index grid_n = kDefaultGrid);

    /// Sampled data; derivatives by finite differences.
    static WarpingFunction sampled(GridFunction samples, std::string family = "samples",
                                   std::map<std::string, double> params = {});

    /// Sampled representation that still knows its analytic derivatives
    /// (used by generators that build profiles piecewise).
    static WarpingFunction sampled_with_field(GridFunction samples, ProfileField field,
                                              std::string family,
                                              std::map<std::string, double> params = {});

    double domain_end() const;
    Representation representation() const;
    DerivativeSource derivative_source() const;

    /// f(s); exact at sample nodes. Throws DomainError outside [0, L].
    double eval(double s) const;

    /// d^order f / ds^order for order in {1, 2}.  For finite-difference
    /// sources, order 2 at s in {0, L} raises UnsupportedPointError.
    double derivative(double s, int order) const;

    /// The sample grid (always present; closed forms are sampled at
    /// construction).
    const GridFunction& grid() const;
    /// Nodal first/second derivative grids (analytic values at nodes when the
    /// source is analytic).
    const GridFunction& derivative_grid(int order) const;

    const EndpointChecks& endpoint_checks() const;

    const std::string& family() const;
    const std::map<std::string, double>& params() const;

    /// True when the two objects describe bitwise the same profile.
    bool same_profile(const WarpingFunction& other) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit WarpingFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

}  // namespace wsl
