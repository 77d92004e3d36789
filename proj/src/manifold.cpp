#include "wsl/manifold.hpp"

#include <cmath>
#include <numbers>

namespace wsl {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace {

GridFunction manifold_grid(const WarpingFunction& wf, Eigen::Index n) {
    if (wf.grid().size() == n) return wf.grid();
    return GridFunction::sample(0.0, wf.domain_end(), n,
                                [&wf](double s) { return wf.eval(s); });
}

GridFunction manifold_deriv(const WarpingFunction& wf, const GridFunction& grid, int order) {
    if (wf.grid().size() == grid.size()) return wf.derivative_grid(order);
    if (wf.derivative_source() == DerivativeSource::analytic)
        return GridFunction::sample(0.0, wf.domain_end(), grid.size(),
                                    [&wf, order](double s) { return wf.derivative(s, order); });
    return grid.derivative(order);
}

}  // namespace

RotSymManifold::RotSymManifold(WarpingFunction warping, Eigen::Index grid_resolution)
    : warping_(std::move(warping)),
      grid_(manifold_grid(warping_, grid_resolution)),
      d1_(manifold_deriv(warping_, grid_, 1)),
      d2_(manifold_deriv(warping_, grid_, 2)) {
    if (warping_.derivative_source() == DerivativeSource::finite_difference)
        h2_ = grid_.map([](double v) { return std::pow(std::max(v, 0.0), 1.5); }).derivative(2);

    validation_.endpoints = warping_.endpoint_checks();
    validation_.positive_interior = validation_.endpoints.positive_interior;
    validation_.smooth = validation_.endpoints.smooth();

    GridFunction f2 = grid_.map([](double v) { return v * v; });
    volume_ = 4.0 * kPi * integrate(f2);
    GridFunction f2_fine = GridFunction::sample(
        0.0, diameter(), 2 * grid_.size() - 1,
        [this](double s) { const double v = warping_.eval(s); return v * v; });
    volume_check_ = 4.0 * kPi * integrate_trapezoid(f2_fine);

    detect_critical_spheres();
    detect_marks();
}

double RotSymManifold::slope_at(double s) const { return warping_.derivative(s, 1); }

double RotSymManifold::scalar_curvature(double s) const {
    const double L = diameter();
    if (!(s > 0.0 && s < L)) throw DomainError("scalar curvature needs 0 < s < L");
    const double fv = warping_.eval(s);
    if (fv <= pole_guard())
        throw PoleProximityError("scalar curvature queried inside the pole guard", s);
    const double fp = warping_.derivative(s, 1);
    const double fpp = warping_.derivative(s, 2);
    return -4.0 * fpp / fv + 2.0 * (1.0 - fp * fp) / (fv * fv);
}

double RotSymManifold::h_criterion_residual(double s) const {
    const double L = diameter();
    if (!(s > 0.0 && s < L)) throw DomainError("h-criterion needs 0 < s < L");
    const double fv = warping_.eval(s);
    if (fv <= pole_guard())
        throw PoleProximityError("h-criterion queried inside the pole guard", s);
    double hpp;
    if (h2_) {
        hpp = (*h2_)(s);
    } else {
        // chain rule on the analytic derivatives: h = f^{3/2}
        const double fp = warping_.derivative(s, 1);
        const double fpp = warping_.derivative(s, 2);
        hpp = 0.75 * fp * fp / std::sqrt(fv) + 1.5 * std::sqrt(fv) * fpp;
    }
    return 0.75 / std::cbrt(std::pow(fv, 1.5)) - hpp;
}

double RotSymManifold::mean_curvature(double s) const {
    const double L = diameter();
    if (!(s > 0.0 && s < L)) throw DomainError("mean curvature needs 0 < s < L");
    const double fv = warping_.eval(s);
    if (fv <= pole_guard())
        throw PoleProximityError("mean curvature queried inside the pole guard", s);
    return 2.0 * warping_.derivative(s, 1) / fv;
}

void RotSymManifold::detect_critical_spheres() {
    const Eigen::Index n = grid_.size();
    const double L = diameter();
    const double refine = tol::bisect_rel * L;
    const auto& d = d1_.values();
    auto slope = [this](double s) { return slope_at(s); };
    auto push = [&](double s, CriticalSphere::Kind kind) {
        const double fv = warping_.eval(s);
        spheres_.push_back({s, 4.0 * kPi * fv * fv, kind});
    };

    // Nodes are classified +, -, or near-zero; runs of near-zero nodes either
    // separate a genuine sign change (refined by bisection) or stand alone as
    // a plateau (>= 3 nodes, reported at the area-minimizing node).
    const Eigen::Index i_lo = 1, i_hi = n - 2;  // interior nodes only
    Eigen::Index i = i_lo;
    int prev_sign = 0;
    Eigen::Index prev_sign_node = -1;
    while (i <= i_hi) {
        const double v = d[i];
        const int sgn = (v > tol::crit) ? 1 : (v < -tol::crit ? -1 : 0);
        if (sgn == 0) {
            Eigen::Index run_start = i;
            while (i <= i_hi && std::abs(d[i]) <= tol::crit) ++i;
            const Eigen::Index run_end = i - 1;  // inclusive
            int next_sign = 0;
            if (i <= i_hi) next_sign = d[i] > 0 ? 1 : -1;
            if (prev_sign != 0 && next_sign != 0 && prev_sign != next_sign) {
                const double s_star = bisect_sign_change(
                    slope, grid_.node(prev_sign_node), grid_.node(i), refine);
                push(s_star, prev_sign > 0 ? CriticalSphere::Kind::interior_max
                                           : CriticalSphere::Kind::interior_min);
            } else if (run_end - run_start + 1 >= 3) {
                Eigen::Index best = run_start;
                for (Eigen::Index k = run_start; k <= run_end; ++k)
                    if (grid_.value(k) < grid_.value(best)) best = k;
                push(grid_.node(best), CriticalSphere::Kind::plateau);
            }
            prev_sign = 0;  // the run consumed any pending sign change
            continue;
        }
        if (prev_sign != 0 && sgn != prev_sign) {
            const double s_star =
                bisect_sign_change(slope, grid_.node(prev_sign_node), grid_.node(i), refine);
            push(s_star, prev_sign > 0 ? CriticalSphere::Kind::interior_max
                                       : CriticalSphere::Kind::interior_min);
        }
        prev_sign = sgn;
        prev_sign_node = i;
        ++i;
    }

    if (spheres_.empty()) {
        // a maximum of f always exists; fall back to the largest sample
        Eigen::Index best = 1;
        for (Eigen::Index k = 1; k + 1 < n; ++k)
            if (grid_.value(k) > grid_.value(best)) best = k;
        push(grid_.node(best), CriticalSphere::Kind::interior_max);
    }
    std::sort(spheres_.begin(), spheres_.end(),
              [](const CriticalSphere& a, const CriticalSphere& b) { return a.s < b.s; });
    min_sphere_index_ = 0;
    for (std::size_t k = 1; k < spheres_.size(); ++k)
        if (spheres_[k].area < spheres_[min_sphere_index_].area) min_sphere_index_ = k;
    sym_min_area_ = spheres_[min_sphere_index_].area;
}

void RotSymManifold::detect_marks() {
    const Eigen::Index n = grid_.size();
    const double L = diameter();
    const double refine = tol::bisect_rel * L;
    const auto& d = d1_.values();
    auto slope = [this](double s) { return slope_at(s); };

    // A: first interior node where f' <= 0, refined on the strict sign.
    Eigen::Index iA = n - 2;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        if (d[i] <= 0.0) {
            iA = i;
            break;
        }
    marks_.A = (iA >= 2 && d[iA - 1] > 0.0)
                   ? bisect_sign_change(slope, grid_.node(iA - 1), grid_.node(iA), refine)
                   : grid_.node(iA);

    // B: last interior node where f' >= 0, mirrored.
    Eigen::Index iB = 1;
    for (Eigen::Index i = n - 2; i >= 1; --i)
        if (d[i] >= 0.0) {
            iB = i;
            break;
        }
    marks_.B = (iB + 2 < n && d[iB] > 0.0 && d[iB + 1] < 0.0)
                   ? bisect_sign_change(slope, grid_.node(iB), grid_.node(iB + 1), refine)
                   : grid_.node(iB);
    if (marks_.B < marks_.A) marks_.B = marks_.A;
}

HypothesisVerdict RotSymManifold::validate_hypotheses(
    double D_cap, double A_floor, std::optional<bool> claim_scalar_nonneg) const {
    if (!(D_cap > 0.0) || !(A_floor > 0.0))
        throw PreconditionError("validate_hypotheses needs positive D_cap and A_floor");
    HypothesisVerdict v;
    v.D_cap = D_cap;
    v.A_floor = A_floor;
    v.diameter = diameter();
    v.diameter_ok = v.diameter <= D_cap;

    auto sweep = scalar_on_grid();
    v.scalar_ok = !sweep.empty();
    v.scalar_min = sweep.empty() ? 0.0 : sweep.front().second;
    v.scalar_argmin = sweep.empty() ? 0.0 : sweep.front().first;
    for (const auto& [s, sc] : sweep) {
        if (sc < v.scalar_min) {
            v.scalar_min = sc;
            v.scalar_argmin = s;
        }
        if (sc < -tol::scalar_rel * (1.0 + std::abs(sc))) v.scalar_ok = false;
    }
    v.scalar_claimed = claim_scalar_nonneg.value_or(false);

    v.sym_min_area = sym_min_area_;
    v.min_area_kind = spheres_[min_sphere_index_].kind;
    v.min_area_approximate = v.min_area_kind == CriticalSphere::Kind::plateau;
    v.min_area_ok = v.sym_min_area >= A_floor;

    v.max_abs_slope = d1_.values().abs().maxCoeff();
    const bool scalar_assertion = v.scalar_ok || v.scalar_claimed;
    v.lipschitz_consistent = !(scalar_assertion && v.max_abs_slope > 1.0 + tol::lip);
    v.area_diameter_consistent = A_floor / (4.0 * kPi) <= v.diameter * v.diameter;
    return v;
}

std::vector<std::pair<double, double>> RotSymManifold::scalar_on_grid() const {
    std::vector<std::pair<double, double>> out;
    const Eigen::Index n = grid_.size();
    const double guard = pole_guard();
    out.reserve(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double fv = grid_.value(i);
        if (fv <= guard) continue;
        const double fp = d1_.value(i);
        const double fpp = d2_.value(i);
        out.emplace_back(grid_.node(i),
                         -4.0 * fpp / fv + 2.0 * (1.0 - fp * fp) / (fv * fv));
    }
    return out;
}

std::vector<std::pair<double, double>> RotSymManifold::h_residual_on_grid() const {
    std::vector<std::pair<double, double>> out;
    const Eigen::Index n = grid_.size();
    const double guard = pole_guard();
    out.reserve(n);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double fv = grid_.value(i);
        if (fv <= guard) continue;
        double hpp;
        if (h2_) {
            hpp = h2_->value(i);
        } else {
            const double fp = d1_.value(i);
            const double fpp = d2_.value(i);
            hpp = 0.75 * fp * fp / std::sqrt(fv) + 1.5 * std::sqrt(fv) * fpp;
        }
        out.emplace_back(grid_.node(i), 0.75 / std::sqrt(fv) - hpp);
    }
    return out;
}

}  // namespace wsl
