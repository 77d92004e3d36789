#include "wsl/sequence.hpp"

#include <cmath>
#include <numbers>

namespace wsl {

namespace {
constexpr double kPi = std::numbers::pi;
}

GridFunction extend_by_zero(const WarpingFunction& wf, double D, Eigen::Index n) {
    const double L = wf.domain_end();
    if (L > D * (1.0 + 1e-12)) throw DomainError("extend_by_zero: domain_end exceeds D");
    if (std::abs(wf.eval(L)) > tol::endpoint)
        throw ConstructionError("extend_by_zero: profile does not vanish at its domain end");
    return GridFunction::sample(0.0, D, n,
                                [&](double s) { return s <= L ? std::max(0.0, wf.eval(s)) : 0.0; });
}

double uniform_distance(const GridFunction& g1, const GridFunction& g2) {
    if (!g1.same_shape(g2)) throw ShapeError("uniform_distance: mismatched grids");
    return (g1.values() - g2.values()).abs().maxCoeff();
}

LimitExtraction extract_limit(const SequenceSpec& seq) {
    if (seq.indices.size() < 3) throw PreconditionError("extract_limit needs >= 3 indices");
    for (size_t i = 1; i < seq.indices.size(); ++i)
        if (seq.indices[i] <= seq.indices[i - 1])
            throw PreconditionError("sequence indices must be strictly increasing");

    std::vector<GridFunction> ext;
    ext.reserve(seq.indices.size());
    for (int j : seq.indices) ext.push_back(extend_by_zero(seq.generator(j), seq.D, seq.grid));

    LimitExtraction out;
    const GridFunction& last = ext.back();
    for (size_t i = 0; i + 1 < ext.size(); ++i)
        out.tail_distances.push_back(uniform_distance(ext[i], last));

    // Cauchy-style decay of the tail: each successive distance at most
    // doubles the previous one (exact-zero chains allowed).
    const double scale = std::max(1e-300, last.max());
    for (size_t i = 0; i + 1 < out.tail_distances.size(); ++i) {
        if (out.tail_distances[i + 1] > 2.0 * out.tail_distances[i] + 1e-14 * scale) {
            out.verdict = LimitVerdict::non_convergent;
            return out;
        }
    }

    // Degenerate limit: the whole profile is inside the remaining tail noise.
    const double tail = out.tail_distances.empty() ? 0.0 : out.tail_distances.back();
    if (last.max() <= 2.0 * tail || last.max() <= tol::pos_rel * seq.D) {
        out.verdict = LimitVerdict::zero_current;
        return out;
    }

    LimitProfile lim{last, 0.0, seq.D, 0.0};
    const double guard = tol::pos_rel * seq.D;
    const Eigen::Index n = last.size();
    Eigen::Index ia = 0;
    while (ia + 1 < n && last.value(ia) <= guard) ++ia;
    Eigen::Index ib = n - 1;
    while (ib > 0 && last.value(ib) <= guard) --ib;
    lim.a_inf = ia > 0 ? last.node(ia - 1) : 0.0;
    lim.b_inf = ib + 1 < n ? last.node(ib + 1) : seq.D;
    double lip = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        lip = std::max(lip, std::abs(last.value(i + 1) - last.value(i)) / last.spacing());
    lim.lipschitz_constant = lip;

    out.verdict = LimitVerdict::converged;
    out.profile = std::move(lim);
    return out;
}

WindowResult superlevel_window(const GridFunction& g, int k) {
    if (k < 1) throw PreconditionError("superlevel window needs k >= 1");
    const double level = 1.0 / static_cast<double>(k);
    if (level >= g.max()) throw DomainError("empty window: 1/k >= max f");

    const Eigen::Index n = g.size();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
    Eigen::Index i = 0;
    while (i < n) {
        if (g.value(i) >= level) {
            Eigen::Index j = i;
            while (j + 1 < n && g.value(j + 1) >= level) ++j;
            runs.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }
    WindowResult res;
    res.window.k = k;
    if (runs.size() != 1) {
        res.status = WindowStatus::disconnected;
        // report the widest run so callers can still inspect it
        auto widest = runs.front();
        for (auto& r : runs)
            if (r.second - r.first > widest.second - widest.first) widest = r;
        runs = {widest};
    }
    const auto [lo, hi] = runs.front();
    const double refine = tol::bisect_rel * (g.hi() - g.lo());
    auto cross = [&](double s) { return g(s) - level; };
    res.window.a_k = (lo > 0 && g.value(lo - 1) < level)
                         ? bisect_sign_change([&](double s) { return -cross(s); }, g.node(lo - 1),
                                              g.node(lo), refine)
                         : g.node(lo);
    res.window.b_k = (hi + 1 < n && g.value(hi + 1) < level)
                         ? bisect_sign_change(cross, g.node(hi), g.node(hi + 1), refine)
                         : g.node(hi);
    return res;
}

WindowResult ik_window(const LimitProfile& lim, int k) { return superlevel_window(lim.f_inf, k); }

namespace {

double l2_norm_on(const GridFunction& g, double a, double b) {
    const Eigen::Index n = std::max<Eigen::Index>(1025, g.size());
    const GridFunction sq =
        GridFunction::sample(a, b, n, [&](double s) { const double v = g(s); return v * v; });
    return std::sqrt(std::max(0.0, integrate(sq)));
}

}  // namespace

H1Report h1_convergence(const SequenceSpec& seq, const IkWindow& window) {
    H1Report rep;
    rep.window = window;
    const double a = window.a_k, b = window.b_k;
    const double floor_needed = 0.5 / static_cast<double>(window.k);

    struct MemberData {
        WarpingFunction wf;
        GridFunction h1;  // h' on the window
        GridFunction f1;  // f' on the window
    };
    std::vector<MemberData> data;
    data.reserve(seq.indices.size());
    const Eigen::Index nw = 2049;

    for (int j : seq.indices) {
        WarpingFunction wf = seq.generator(j);
        if (wf.domain_end() < b)
            throw PreconditionError("h1_convergence: window exceeds a member domain");
        GridFunction f1 = GridFunction::sample(
            a, b, nw, [&](double s) { return wf.derivative(s, 1); });
        GridFunction h1 = GridFunction::sample(a, b, nw, [&](double s) {
            return 1.5 * std::sqrt(std::max(0.0, wf.eval(s))) * wf.derivative(s, 1);
        });
        data.push_back({std::move(wf), std::move(h1), std::move(f1)});
    }

    const double bv_bound = 1.5 *
                                std::pow((2.0 / 3.0) * std::pow(1.0 / window.k, 1.5),
                                         -1.0 / 3.0) *
                                (b - a) +
                            3.0 * std::sqrt(seq.D / 2.0);

    const MemberData& last = data.back();
    const GridFunction ext_last = extend_by_zero(last.wf, seq.D, seq.grid);
    for (size_t idx = 0; idx < data.size(); ++idx) {
        const MemberData& md = data[idx];
        MemberDiagnostics d;
        d.j = seq.indices[idx];
        d.uniform_dist = uniform_distance(extend_by_zero(md.wf, seq.D, seq.grid), ext_last);

        double mn = md.wf.eval(a);
        const Eigen::Index probes = 1024;
        for (Eigen::Index i = 0; i <= probes; ++i)
            mn = std::min(mn, md.wf.eval(a + (b - a) * i / probes));
        d.min_on_window = mn;
        if (mn < floor_needed)
            throw PreconditionError("h1_convergence: member drops below 1/(2k) on the window");

        Eigen::ArrayXd df = md.f1.values() - last.f1.values();
        d.l2_fprime_diff = l2_norm_on(GridFunction(a, b, df), a, b);
        Eigen::ArrayXd dh = md.h1.values() - last.h1.values();
        d.l2_hprime_diff = l2_norm_on(GridFunction(a, b, dh), a, b);

        // BV seminorm of h' as the integral of |h''|
        const GridFunction habs = GridFunction::sample(a, b, nw, [&](double s) {
            const double fv = std::max(md.wf.eval(s), 1e-300);
            const double fp = md.wf.derivative(s, 1);
            const double fpp = md.wf.derivative(s, 2);
            return std::abs(0.75 * fp * fp / std::sqrt(fv) + 1.5 * std::sqrt(fv) * fpp);
        });
        d.bv_hprime = integrate(habs);
        d.bv_bound = bv_bound;
        d.bv_margin = bv_bound - d.bv_hprime;

        const RotSymManifold mf(md.wf);
        d.A = mf.monotonicity_marks().A;
        d.B = mf.monotonicity_marks().B;
        rep.members.push_back(d);
    }
    return rep;
}

double TestFunction::value(double s) const {
    const double t = (s - center) / radius;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double TestFunction::deriv(double s) const {
    const double t = (s - center) / radius;
    if (std::abs(t) >= 1.0) return 0.0;
    const double w = 1.0 - t * t;
    return value(s) * (-2.0 * t / (w * w)) / radius;
}

std::vector<TestFunction> default_bump_battery(double lo, double hi) {
    std::vector<TestFunction> out;
    const double margin = 0.02 * (hi - lo);
    const double a = lo + margin, b = hi - margin;
    for (int i = 1; i <= 9; ++i) {
        const double c = a + (b - a) * i / 10.0;
        const double room = std::min(c - a, b - c);
        for (double rho : {0.9, 0.6, 0.3}) out.push_back({c, rho * room});
    }
    return out;
}

std::vector<DistributionalResult> distributional_scalar_test(
    const GridFunction& profile, const std::vector<TestFunction>& tests) {
    const GridFunction d1 = profile.derivative(1);
    const double guard = tol::pos_rel * (profile.hi() - profile.lo());
    std::vector<DistributionalResult> out;
    out.reserve(tests.size());
    for (const TestFunction& u : tests) {
        const double lo = u.center - u.radius, hi = u.center + u.radius;
        if (lo < profile.lo() || hi > profile.hi())
            throw PreconditionError("test function support leaves the profile interval");
        const Eigen::Index probes = 512;
        for (Eigen::Index i = 0; i <= probes; ++i)
            if (profile(lo + (hi - lo) * i / probes) <= guard)
                throw PreconditionError("test function supported where the profile vanishes");

        const Eigen::Index n = 4097;
        const GridFunction lhs_g = GridFunction::sample(lo, hi, n, [&](double s) {
            const double fp = d1(s);
            return (1.0 + fp * fp) * u.value(s);
        });
        const GridFunction rhs_g = GridFunction::sample(lo, hi, n, [&](double s) {
            return profile(s) * d1(s) * u.deriv(s);
        });
        DistributionalResult r;
        r.u = u;
        r.lhs = integrate(lhs_g);
        r.rhs = -2.0 * integrate(rhs_g);
        r.pass = r.lhs >= r.rhs - tol::dist_rel * (1.0 + std::abs(r.lhs));
        out.push_back(r);
    }
    return out;
}

TangentConePortrait tangent_cone_portrait(const LimitProfile& lim, int n_points) {
    if (n_points < 2) throw PreconditionError("tangent_cone_portrait needs n_points >= 2");
    const GridFunction& g = lim.f_inf;
    const double h = 64.0 * g.spacing();
    const double lo = std::max(lim.a_inf, g.lo()) + h;
    const double hi = std::min(lim.b_inf, g.hi()) - h;
    if (!(hi > lo)) throw PreconditionError("limit support too small for the probe scale");

    TangentConePortrait port;
    int euclid = 0;
    for (int i = 0; i < n_points; ++i) {
        const double s = lo + (hi - lo) * i / (n_points - 1);
        ConeProbe probe;
        probe.s = s;
        double gap[3];
        for (int m = 0; m < 3; ++m) {
            const double sc = h / static_cast<double>(1 << m);
            const double left = (g(s) - g(s - sc)) / sc;
            const double right = (g(s + sc) - g(s)) / sc;
            gap[m] = std::abs(left - right);
        }
        // Richardson in the scale: smooth points have gap ~ |f''| * scale
        probe.extrapolated_gap = 2.0 * gap[2] - gap[1];
        const bool shrinking =
            gap[2] <= gap[1] + tol::cone && gap[1] <= gap[0] + tol::cone;
        const bool stable_large =
            std::min({gap[0], gap[1], gap[2]}) > 10.0 * tol::cone &&
            std::abs(gap[0] - gap[2]) <= 0.5 * std::min({gap[0], gap[1], gap[2]});
        if (std::abs(probe.extrapolated_gap) <= tol::cone && shrinking) {
            probe.cls = ConeClass::euclidean;
            ++euclid;
        } else if (stable_large && std::abs(probe.extrapolated_gap) > 10.0 * tol::cone) {
            probe.cls = ConeClass::corner;
            port.corners.push_back(s);
        } else {
            probe.cls = ConeClass::unresolved;
            ++port.unresolved;
        }
        port.probes.push_back(probe);
    }
    port.euclidean_fraction = static_cast<double>(euclid) / n_points;
    return port;
}

std::vector<std::pair<double, double>> pole_volume_ratio(const LimitProfile& lim, Pole pole,
                                                         const std::vector<double>& radii) {
    const double span = lim.b_inf - lim.a_inf;
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        if (!(r > 0.0)) throw DomainError("pole ratio radii must be positive");
        if (i > 0 && radii[i] >= radii[i - 1])
            throw DomainError("pole ratio radii must be decreasing");
        if (r >= 0.5 * span) throw DomainError("pole ratio radius too large for the support");
        const double a = pole == Pole::left ? lim.a_inf : lim.b_inf - r;
        const double b = pole == Pole::left ? lim.a_inf + r : lim.b_inf;
        const Eigen::Index n = 4097;
        const GridFunction f2 = GridFunction::sample(a, b, n, [&](double s) {
            const double v = lim.f_inf(s);
            return v * v;
        });
        const double vol_int = integrate(f2);
        const double ratio = (r * r * r - 3.0 * vol_int) / (r * r * r * r * r);
        out.emplace_back(r, ratio);
    }
    return out;
}

}  // namespace wsl
