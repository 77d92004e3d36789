#include "wsl/swif.hpp"

#include <cmath>
#include <numbers>

namespace wsl {

namespace {
constexpr double kPi = std::numbers::pi;
}

WindowGeometry window_volumes(const RotSymManifold& m, const IkWindow& window, double D) {
    const double L = m.diameter();
    if (window.a_k < 0.0 || window.b_k > L * (1.0 + 1e-12) || !(window.b_k > window.a_k))
        throw DomainError("window_volumes: window not inside the manifold domain");
    const Eigen::Index n = 8193;
    const GridFunction f2 = GridFunction::sample(window.a_k, std::min(window.b_k, L), n,
                                                 [&](double s) {
                                                     const double v = m.f(s);
                                                     return v * v;
                                                 });
    WindowGeometry g;
    g.vol_W = 4.0 * kPi * integrate(f2);
    const double fa = m.f(window.a_k), fb = m.f(window.b_k);
    g.area_bdry = 4.0 * kPi * (fa * fa + fb * fb);
    g.vol_excess = std::max(0.0, m.volume() - g.vol_W);

    const double k = static_cast<double>(window.k);
    g.margin_vol_excess = 16.0 * kPi * D / (k * k) - g.vol_excess;
    g.margin_vol_W = 4.0 * kPi * D * D * D - g.vol_W;
    g.margin_area = 8.0 * kPi * D * D - g.area_bdry;
    return g;
}

double epsilon_of_window(const RotSymManifold& m1, const RotSymManifold& m2,
                         const IkWindow& window) {
    if (window.a_k < 0.0 || window.b_k > std::min(m1.diameter(), m2.diameter()) * (1.0 + 1e-12))
        throw DomainError("epsilon_of_window: window not inside both domains");
    if (m1.warping().same_profile(m2.warping())) return 0.0;
    const Eigen::Index probes = 8192;
    double worst = 1.0;
    for (Eigen::Index i = 0; i <= probes; ++i) {
        const double s = window.a_k + window.width() * i / probes;
        const double f1 = m1.f(s), f2 = m2.f(s);
        if (!(f1 > 0.0) || !(f2 > 0.0))
            throw PreconditionError("epsilon_of_window: warping vanishes inside the window");
        worst = std::max({worst, f1 / f2, f2 / f1});
    }
    return worst - 1.0;
}

SwifBoundReport swif_upper_bound(const RotSymManifold& m1, const RotSymManifold& m2,
                                 const IkWindow& window, double D_cap,
                                 const SwifOptions& opts) {
    const double L1 = m1.diameter(), L2 = m2.diameter();
    const double D0 = std::max(L1, L2);
    if (D0 > D_cap * (1.0 + 1e-12))
        throw PreconditionError("swif_upper_bound: max diameter exceeds D_cap");

    SwifBoundReport rep;
    rep.k = window.k;
    rep.window = window;
    rep.D0 = D0;
    rep.epsilon = opts.epsilon_override ? *opts.epsilon_override
                                        : epsilon_of_window(m1, m2, window);

    const LambdaEstimate le = lambda_estimate(m1, m2, window, opts.n_pairs, opts.resolution);
    rep.lambda_lower = le.lower;
    rep.lambda_upper = le.analytic_upper;
    rep.lambda_argmax = le.argmax;
    if (opts.lambda_override) {
        rep.lambda_used = *opts.lambda_override;
        rep.lambda_certified = false;
    } else if (opts.lambda_mode == SwifOptions::LambdaMode::sampled) {
        rep.lambda_used = le.lower;
        rep.lambda_certified = false;
    } else {
        rep.lambda_used = le.analytic_upper;
        rep.lambda_certified = true;
    }

    const double lam = rep.lambda_used;
    const double eps = rep.epsilon;
    rep.h = std::sqrt(lam * (D0 + 0.25 * lam));
    rep.h_inequality_ok = rep.h <= std::sqrt(2.0 * lam * D0) * (1.0 + 1e-12) ||
                          (lam == 0.0 && rep.h == 0.0);
    rep.h_bar = std::max(rep.h, D0 * std::sqrt(eps * eps + 2.0 * eps));
    const double a_min = std::acos(1.0 / (1.0 + eps)) * D0 / kPi;
    rep.a = opts.a_override ? *opts.a_override : a_min;
    if (rep.a < a_min * (1.0 - 1e-12))
        throw PreconditionError("swif_upper_bound: a below the admissible minimum");

    rep.geom1 = window_volumes(m1, window, D_cap);
    rep.geom2 = window_volumes(m2, window, D_cap);

    const double bulk = rep.geom1.vol_W + rep.geom2.vol_W + rep.geom1.area_bdry +
                        rep.geom2.area_bdry;
    const double neck_term = (2.0 * rep.h_bar + rep.a) * bulk;
    const double excess_term = rep.geom1.vol_excess + rep.geom2.vol_excess;
    rep.bound = neck_term + excess_term;
    rep.term_breakdown = {
        {"neck_factor", 2.0 * rep.h_bar + rep.a},
        {"bulk_volume_area", bulk},
        {"neck_term", neck_term},
        {"excess_term", excess_term},
    };
    return rep;
}

double rate_certificate(double D, double D0, int k, int i) {
    if (!(D > 0.0) || !(D0 > 0.0) || k < 2 || i < 0)
        throw PreconditionError("rate_certificate needs D, D0 > 0, k >= 2, i >= 0");
    const double bulk = (4.0 * D0 + 2.0 * D / std::sqrt(kPi)) *
                            (8.0 * kPi * D * D * D + 16.0 * kPi * D * D) +
                        8.0 * kPi * D;
    return bulk / std::sqrt(static_cast<double>(k) + static_cast<double>(i));
}

}  // namespace wsl
