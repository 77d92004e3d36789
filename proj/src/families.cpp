#include "wsl/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wsl/expression.hpp"

namespace wsl {

namespace {
constexpr double kPi = std::numbers::pi;

double ipow(double x, int n) {
    double acc = 1.0, base = x;
    for (int k = n; k > 0; k >>= 1) {
        if (k & 1) acc *= base;
        base *= base;
    }
    return acc;
}
}  // namespace

WarpingFunction round_sphere(double radius, Eigen::Index grid) {
    if (!(radius > 0.0)) throw ConstructionError("round_sphere radius must be positive");
    const double R = radius;
    ProfileField field{
        [R](double s) { return R * std::sin(s / R); },
        [R](double s) { return std::cos(s / R); },
        [R](double s) { return -std::sin(s / R) / R; },
    };
    return WarpingFunction::closed_form("round_sphere", {{"radius", radius}}, std::move(field),
                                        kPi * radius, grid);
}

WarpingFunction collapsing_family(int j, Eigen::Index grid) {
    if (j < 1) throw ConstructionError("collapsing_family needs j >= 1");
    const int m = 2 * j + 2;
    ProfileField field{
        [m](double s) { return (1.0 - ipow(1.0 - s, m)) / m; },
        [m](double s) { return ipow(1.0 - s, m - 1); },
        [m](double s) { return -(m - 1) * ipow(1.0 - s, m - 2); },
    };
    return WarpingFunction::closed_form("collapsing", {{"j", static_cast<double>(j)}},
                                        std::move(field), 2.0, grid);
}

WarpingFunction scaled_sine(double c, Eigen::Index grid) {
    if (!(c > 0.0)) throw ConstructionError("scaled_sine needs a positive scale");
    ProfileField field{
        [c](double s) { return c * std::sin(s); },
        [c](double s) { return c * std::cos(s); },
        [c](double s) { return -c * std::sin(s); },
    };
    return WarpingFunction::closed_form("scaled_sine", {{"c", c}}, std::move(field), kPi, grid);
}

namespace {

/// Monotone C^2 step on [0, 1].
double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_d(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

struct LakzianCore {
    double delta, eps;
    double r0, r1;     // blend zone [delta^3, delta]
    double m0, dm;     // blend start value and rise

    double mass(double r) const {
        if (r <= r0) return 0.5 * r * (1.0 - eps * eps);
        if (r >= r1) return 0.5 * r * r * r;
        const double t = (r - r0) / (r1 - r0);
        return m0 + dm * smoothstep5(t);
    }
    double mass_d(double r) const {
        if (r < r0) return 0.5 * (1.0 - eps * eps);
        if (r > r1) return 1.5 * r * r;
        const double t = (r - r0) / (r1 - r0);
        return dm * smoothstep5_d(t) / (r1 - r0);
    }
    // ds/dr of the arclength chart
    double stretch(double r) const {
        const double q = 2.0 * mass(r) / r;
        if (!(q < 1.0)) {
            std::ostringstream msg;
            msg << "lakzian_family: 2 m_H(r) >= r at r = " << r;
            throw ConstructionError(msg.str());
        }
        return 1.0 / std::sqrt(1.0 - q);
    }
};

}  // namespace

double LakzianProfile::hawking_mass(double r) const {
    LakzianCore core{params.delta, epsilon, ipow(params.delta, 3), params.delta,
                     0.5 * ipow(params.delta, 3) * (1.0 - epsilon * epsilon),
                     0.5 * ipow(params.delta, 3) * epsilon * epsilon};
    return core.mass(r);
}

double LakzianProfile::z_prime(double r) const {
    const double m = hawking_mass(r);
    const double denom = r - 2.0 * m;
    if (!(denom > 0.0)) throw ConstructionError("z' undefined: 2 m_H(r) >= r");
    return std::sqrt(2.0 * m / denom);
}

LakzianProfile lakzian_family(const LakzianParams& p) {
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw ConstructionError("lakzian_family: delta must lie in (0, 1)");
    if (!(p.L_spline > 0.0)) throw ConstructionError("lakzian_family: L_spline must be positive");
    if (p.grid < 64) throw ConstructionError("lakzian_family: grid too coarse");

    const double d3 = ipow(p.delta, 3);
    // delta^3 sqrt((1-eps^2)/eps^2) = L  <=>  eps = delta^3 / sqrt(L^2 + delta^6)
    const double eps_exact = d3 / std::sqrt(p.L_spline * p.L_spline + d3 * d3);

    LakzianCore core{p.delta, eps_exact, d3, p.delta, 0.5 * d3 * (1.0 - eps_exact * eps_exact),
                     0.5 * d3 * eps_exact * eps_exact};

    // verify monotonicity and 2m < r across the blend
    {
        const int probes = 4096;
        double prev = core.mass(core.r0);
        for (int i = 1; i <= probes; ++i) {
            const double r = core.r0 + (core.r1 - core.r0) * i / probes;
            const double m = core.mass(r);
            if (m + 1e-18 < prev)
                throw ConstructionError("lakzian_family: Hawking mass blend not monotone");
            core.stretch(r);  // throws if 2m >= r
            prev = m;
        }
    }

    // cumulative arclength across the blend on a grid graded toward r0,
    // where the integrand has a steep regularized layer
    const int M = 4096;
    std::vector<double> r_tab(M + 1), s_tab(M + 1);
    const double arm_end_s = d3 / eps_exact;  // = sqrt(L^2 + delta^6)
    r_tab[0] = core.r0;
    s_tab[0] = arm_end_s;
    for (int i = 1; i <= M; ++i) {
        const double u = static_cast<double>(i) / M;
        r_tab[i] = core.r0 + (core.r1 - core.r0) * u * u;
        s_tab[i] = s_tab[i - 1] +
                   integrate_adaptive([&core](double r) { return core.stretch(r); }, r_tab[i - 1],
                                      r_tab[i], 1e-14);
    }
    const double blend_end_s = s_tab[M];
    const double equator_s = blend_end_s + (0.5 * kPi - std::asin(p.delta));
    const double domain_end = equator_s + 0.5 * kPi;

    auto r_of_s = [r_tab, s_tab, M](double s) {
        auto it = std::upper_bound(s_tab.begin(), s_tab.end(), s);
        int i = static_cast<int>(it - s_tab.begin());
        i = std::clamp(i, 1, M);
        const double w = (s - s_tab[i - 1]) / (s_tab[i] - s_tab[i - 1]);
        return r_tab[i - 1] + w * (r_tab[i] - r_tab[i - 1]);
    };

    const double asin_delta = std::asin(p.delta);
    auto fval = [=](double s) {
        if (s <= arm_end_s) return eps_exact * s;
        if (s < blend_end_s) return r_of_s(s);
        if (s <= equator_s) return std::sin(asin_delta + (s - blend_end_s));
        return std::cos(s - equator_s);
    };
    auto fder = [=](double s) {
        if (s <= arm_end_s) return eps_exact;
        if (s < blend_end_s) {
            const double r = r_of_s(s);
            return std::sqrt(std::max(0.0, 1.0 - 2.0 * core.mass(r) / r));
        }
        if (s <= equator_s) return std::cos(asin_delta + (s - blend_end_s));
        return -std::sin(s - equator_s);
    };
    auto fder2 = [=](double s) {
        if (s <= arm_end_s) return 0.0;
        if (s < blend_end_s) {
            const double r = r_of_s(s);
            return core.mass(r) / (r * r) - core.mass_d(r) / r;
        }
        if (s <= equator_s) return -std::sin(asin_delta + (s - blend_end_s));
        return -std::cos(s - equator_s);
    };

    GridFunction samples = GridFunction::sample(0.0, domain_end, p.grid, fval);
    WarpingFunction wf = WarpingFunction::sampled_with_field(
        std::move(samples), ProfileField{fval, fder, fder2}, "lakzian",
        {{"delta", p.delta}, {"L_spline", p.L_spline}});

    return LakzianProfile{p, eps_exact, arm_end_s, blend_end_s, equator_s, std::move(wf)};
}

GridFunction mollify(const GridFunction& g, double radius) {
    if (radius <= 0.0) return g;
    const Eigen::Index n = g.size();
    const int K = std::max(1, static_cast<int>(std::lround(radius / g.spacing())));
    // quartic kernel w(x) ~ (1 - (x/r)^2)^2 sampled on the stencil
    std::vector<double> w(2 * K + 1);
    double norm = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double x = static_cast<double>(k) / (K + 1);
        w[k + K] = (1.0 - x * x) * (1.0 - x * x);
        norm += w[k + K];
    }
    for (auto& v : w) v /= norm;

    const auto& src = g.values();
    auto fetch = [&](Eigen::Index i) {
        if (i < 0) return 2.0 * src[0] - src[-i];
        if (i >= n) return 2.0 * src[n - 1] - src[2 * (n - 1) - i];
        return src[i];
    };
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -K; k <= K; ++k) acc += w[k + K] * fetch(i + k);
        out[i] = acc;
    }
    out[0] = src[0];
    out[n - 1] = src[n - 1];
    return GridFunction(g.lo(), g.hi(), std::move(out));
}

WarpingFunction custom_profile(const CustomSpec& spec) {
    if (spec.samples.has_value() == spec.expression.has_value())
        throw ParseError("custom profile needs exactly one of samples/expression");
    if (!(spec.domain_end > 0.0)) throw ConstructionError("custom profile: domain_end must be positive");
    if (spec.samples && spec.samples->size() < 8)
        throw ConstructionError("custom profile: need at least 8 samples");

    GridFunction g = [&] {
        if (spec.samples) {
            const auto& v = *spec.samples;
            Eigen::ArrayXd a(static_cast<Eigen::Index>(v.size()));
            for (size_t i = 0; i < v.size(); ++i) a[static_cast<Eigen::Index>(i)] = v[i];
            return GridFunction(0.0, spec.domain_end, std::move(a));
        }
        Expression e = Expression::parse(*spec.expression);
        return GridFunction::sample(0.0, spec.domain_end, spec.grid,
                                    [&e](double s) { return e.eval_s(s); });
    }();
    if (spec.smooth_radius > 0.0) g = mollify(g, spec.smooth_radius);

    WarpingFunction wf = WarpingFunction::sampled(std::move(g), "custom");
    if (spec.strict) {
        const auto& c = wf.endpoint_checks();
        std::vector<std::string> bad;
        if (!c.left_zero) bad.push_back("f(0) = " + std::to_string(c.f_left) + " (expected 0)");
        if (!c.right_zero) bad.push_back("f(L) = " + std::to_string(c.f_right) + " (expected 0)");
        if (!c.positive_interior) bad.push_back("f must be positive on the open interval");
        if (!bad.empty()) {
            std::string msg = "custom profile invariant violations:";
            for (const auto& b : bad) msg += "\n  - " + b;
            throw ConstructionError(msg);
        }
    }
    return wf;
}

}  // namespace wsl
