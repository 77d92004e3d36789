#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wsl/manifold.hpp"
#include "wsl/window.hpp"

namespace wsl {

/// A family schedule: generator by index, the indices to analyze, and the
/// common interval end D (members are extended by zero to [0, D]).
struct SequenceSpec {
    std::string family_name;
    std::function<WarpingFunction(int)> generator;
    std::vector<int> indices;    // strictly increasing
    double D = 0.0;
    Eigen::Index grid = kDefaultGrid;
};

/// Extend f by zero on [L, D], sampled on a fresh uniform grid of [0, D].
GridFunction extend_by_zero(const WarpingFunction& wf, double D, Eigen::Index n = kDefaultGrid);

/// Max-norm of the difference of two grid functions with identical shape.
double uniform_distance(const GridFunction& g1, const GridFunction& g2);

/// Empirical limit data: the last member as proxy, positivity span, slope.
struct LimitProfile {
    GridFunction f_inf;
    double a_inf = 0.0;
    double b_inf = 0.0;
    double lipschitz_constant = 0.0;
};

enum class LimitVerdict { converged, zero_current, non_convergent };

struct LimitExtraction {
    LimitVerdict verdict = LimitVerdict::non_convergent;
    std::optional<LimitProfile> profile;        // present only when converged
    std::vector<double> tail_distances;         // C0 distance of each member to the last
};

LimitExtraction extract_limit(const SequenceSpec& seq);

enum class WindowStatus { ok, disconnected };

struct WindowResult {
    WindowStatus status = WindowStatus::ok;
    IkWindow window;
};

/// Superlevel window {g >= 1/k}; throws DomainError when 1/k >= max g,
/// reports `disconnected` when the superlevel set is not an interval.
WindowResult superlevel_window(const GridFunction& g, int k);

/// Superlevel window of a limit profile.
WindowResult ik_window(const LimitProfile& lim, int k);

/// Per-member H1/BV diagnostics over a window.
struct MemberDiagnostics {
    int j = 0;
    double uniform_dist = 0.0;    // C0 distance to the last member on [0, D]
    double l2_fprime_diff = 0.0;  // ||f_j' - f_last'||_{L^2(I_k)}
    double l2_hprime_diff = 0.0;  // ||h_j' - h_last'||_{L^2(I_k)}, h = f^{3/2}
    double bv_hprime = 0.0;       // integral of |h_j''| over I_k
    double bv_bound = 0.0;        // (3/2)((2/3)(1/k)^{3/2})^{-1/3}(b_k - a_k) + 3 sqrt(D/2)
    double bv_margin = 0.0;       // bound - value
    double min_on_window = 0.0;
    double A = 0.0, B = 0.0;      // monotonicity marks of the member
};

struct H1Report {
    IkWindow window;
    std::vector<MemberDiagnostics> members;
};

H1Report h1_convergence(const SequenceSpec& seq, const IkWindow& window);

/// Smooth bump compactly supported in (center - radius, center + radius).
struct TestFunction {
    double center = 0.0;
    double radius = 0.0;
    double value(double s) const;
    double deriv(double s) const;
};

/// Deterministic 9-center x 3-radius battery inside (lo, hi).
std::vector<TestFunction> default_bump_battery(double lo, double hi);

struct DistributionalResult {
    TestFunction u;
    double lhs = 0.0;  //  integral (1 + f'^2) u
    double rhs = 0.0;  // -2 integral (f' f) u'
    bool pass = false;
};

/// Weak form of the nonnegative-scalar inequality against a test battery.
std::vector<DistributionalResult> distributional_scalar_test(
    const GridFunction& profile, const std::vector<TestFunction>& tests);

enum class ConeClass { euclidean, corner, unresolved };

struct ConeProbe {
    double s = 0.0;
    ConeClass cls = ConeClass::unresolved;
    double extrapolated_gap = 0.0;  // |left - right| quotient gap at scale -> 0
};

struct TangentConePortrait {
    std::vector<ConeProbe> probes;
    double euclidean_fraction = 0.0;
    std::vector<double> corners;
    int unresolved = 0;
};

/// Differentiability portrait of the limit profile: left/right difference
/// quotients at scales h, h/2, h/4 (h = 64 grid spacings), Richardson
/// extrapolated; differentiable points carry Euclidean tangent cones.
TangentConePortrait tangent_cone_portrait(const LimitProfile& lim, int n_points);

enum class Pole { left, right };

/// Pole volume-defect ratios (4pi/3 r^3 - Vol B(pole, r)) / (4pi/3 r^5);
/// the small-r limit is Scalar/30 on smooth profiles.
std::vector<std::pair<double, double>> pole_volume_ratio(const LimitProfile& lim, Pole pole,
                                                         const std::vector<double>& radii);

}  // namespace wsl
