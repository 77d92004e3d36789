#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "wsl/families.hpp"
#include "wsl/sequence.hpp"

using namespace wsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;

SequenceSpec constant_sine(Eigen::Index grid = kDefaultGrid) {
    return {"constant", [grid](int) { return scaled_sine(1.0, grid); }, {1, 2, 3}, kPi, grid};
}

SequenceSpec damped_sine(std::vector<int> indices = {4, 8, 16, 32},
                         Eigen::Index grid = kDefaultGrid) {
    return {"damped_sine",
            [grid](int j) { return scaled_sine(1.0 / (1.0 + 1.0 / j), grid); },
            std::move(indices), kPi, grid};
}

SequenceSpec collapsing_seq() {
    return {"collapsing", [](int j) { return collapsing_family(j); }, {1, 2, 4, 10}, 2.0,
            kDefaultGrid};
}

LimitProfile exact_limit(const std::function<double(double)>& f, double D, double a, double b,
                         Eigen::Index n = kDefaultGrid) {
    GridFunction g = GridFunction::sample(0.0, D, n, f);
    double lip = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        lip = std::max(lip, std::abs(g.value(i + 1) - g.value(i)) / g.spacing());
    return {std::move(g), a, b, lip};
}
}  // namespace

TEST_CASE("extend by zero") {
    auto g = extend_by_zero(round_sphere(1.0), 4.0);
    REQUIRE(g.hi() == 4.0);
    REQUIRE_THAT(g(2.0), WithinAbs(std::sin(2.0), 1e-7));
    for (double s : {3.2, 3.6, 4.0}) REQUIRE(g(s) == 0.0);

    auto unchanged = extend_by_zero(collapsing_family(1), 2.0);
    REQUIRE(unchanged.hi() == 2.0);

    // a profile that does not close up cannot be extended
    CustomSpec cs;
    cs.expression = "0.3 + 0.2 * s";
    cs.domain_end = 1.0;
    cs.strict = false;
    REQUIRE_THROWS_AS(extend_by_zero(custom_profile(cs), 2.0), ConstructionError);
}

TEST_CASE("uniform distance") {
    auto g = extend_by_zero(round_sphere(1.0), 4.0);
    REQUIRE(uniform_distance(g, g) == 0.0);

    const double D = 2.0;
    auto zero = GridFunction::sample(0.0, D, kDefaultGrid, [](double) { return 0.0; });
    for (int j : {1, 3, 7}) {
        auto fj = extend_by_zero(collapsing_family(j), D);
        REQUIRE_THAT(uniform_distance(fj, zero), WithinRel(1.0 / (2.0 * j + 2.0), 1e-9));
    }
    auto f1 = extend_by_zero(collapsing_family(1), D);
    auto f2 = extend_by_zero(collapsing_family(2), D);
    REQUIRE(uniform_distance(f1, f2) <= 0.25 + 1.0 / 6.0);

    auto different = GridFunction::sample(0.0, 1.0, kDefaultGrid, [](double) { return 0.0; });
    REQUIRE_THROWS_AS(uniform_distance(f1, different), ShapeError);
}

TEST_CASE("limit extraction: constant, collapsing, damped") {
    const auto constant = extract_limit(constant_sine());
    REQUIRE(constant.verdict == LimitVerdict::converged);
    REQUIRE_THAT(constant.profile->a_inf, WithinAbs(0.0, 1e-3));
    REQUIRE_THAT(constant.profile->b_inf, WithinAbs(kPi, 1e-3));
    REQUIRE(constant.profile->lipschitz_constant <= 1.0 + tol::lip);

    const auto collapsed = extract_limit(collapsing_seq());
    REQUIRE(collapsed.verdict == LimitVerdict::zero_current);
    REQUIRE_FALSE(collapsed.profile.has_value());

    const auto damped = extract_limit(damped_sine());
    REQUIRE(damped.verdict == LimitVerdict::converged);
    REQUIRE(damped.profile->lipschitz_constant <= 1.0 + tol::lip);

    // a tail that blows up is flagged, not thrown
    SequenceSpec osc;
    osc.family_name = "oscillate";
    osc.indices = {1, 2, 3, 4};
    osc.D = kPi;
    osc.grid = 1024;
    osc.generator = [](int j) { return scaled_sine(j % 2 == 0 ? 1.0 : 0.2, 1024); };
    REQUIRE(extract_limit(osc).verdict == LimitVerdict::non_convergent);
}

TEST_CASE("limit profile is 1-Lipschitz on grid pairs") {
    const auto damped = extract_limit(damped_sine());
    const auto& g = damped.profile->f_inf;
    for (Eigen::Index i = 0; i + 64 < g.size(); i += 64)
        REQUIRE(std::abs(g.value(i + 64) - g.value(i)) <=
                (1.0 + tol::lip) * 64.0 * g.spacing());
}

TEST_CASE("I_k windows of sin") {
    auto lim = exact_limit([](double s) { return std::sin(s); }, kPi, 0.0, kPi);
    const auto w2 = ik_window(lim, 2);
    REQUIRE(w2.status == WindowStatus::ok);
    REQUIRE_THAT(w2.window.a_k, WithinAbs(kPi / 6.0, 1e-9));
    REQUIRE_THAT(w2.window.b_k, WithinAbs(5.0 * kPi / 6.0, 1e-9));
    REQUIRE_THAT(lim.f_inf(w2.window.a_k), WithinAbs(0.5, 1e-9));

    // nesting toward the full positive region
    IkWindow prev = w2.window;
    for (int k : {4, 8, 16, 64, 256}) {
        const auto wk = ik_window(lim, k).window;
        REQUIRE(wk.a_k <= prev.a_k + 1e-12);
        REQUIRE(wk.b_k >= prev.b_k - 1e-12);
        prev = wk;
    }
    REQUIRE(prev.a_k < 0.01);
    REQUIRE(prev.b_k > kPi - 0.01);

    REQUIRE_THROWS_AS(ik_window(lim, 1), DomainError);  // 1/k above the max

    // two bumps: superlevel set splits
    auto bumps = exact_limit(
        [](double s) { return std::max(0.0, std::sin(s)) + std::max(0.0, std::sin(s - 4.0)); },
        4.0 + kPi, 0.0, 4.0 + kPi);
    REQUIRE(ik_window(bumps, 3).status == WindowStatus::disconnected);
}

TEST_CASE("h1 convergence diagnostics on the damped family") {
    auto seq = damped_sine();
    auto lim = extract_limit(seq);
    const IkWindow w = ik_window(*lim.profile, 2).window;
    const H1Report rep = h1_convergence(seq, w);
    REQUIRE(rep.members.size() == seq.indices.size());

    // constant sequence: everything vanishes
    const H1Report flat = h1_convergence(constant_sine(), w);
    for (const auto& d : flat.members) {
        REQUIRE_THAT(d.uniform_dist, WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(d.l2_fprime_diff, WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(d.l2_hprime_diff, WithinAbs(0.0, 1e-12));
    }

    // analytic oracle: ||f_j' - f_last'||_{L^2} = |c_j - c_last| sqrt(int cos^2)
    const double c_last = 1.0 / (1.0 + 1.0 / 32.0);
    const double cos2 = integrate(
        [&](double s) { const double c = std::cos(s); return c * c; }, w.a_k, w.b_k, 4097);
    for (size_t i = 0; i < rep.members.size(); ++i) {
        const double cj = 1.0 / (1.0 + 1.0 / seq.indices[i]);
        REQUIRE_THAT(rep.members[i].l2_fprime_diff,
                     WithinAbs(std::abs(cj - c_last) * std::sqrt(cos2), 1e-6));
        REQUIRE(rep.members[i].bv_margin > 0.0);
        REQUIRE(rep.members[i].min_on_window >= 0.5 / w.k);
    }
    // decay toward the proxy limit
    for (size_t i = 0; i + 1 < rep.members.size(); ++i)
        REQUIRE(rep.members[i + 1].l2_hprime_diff <= rep.members[i].l2_hprime_diff + 1e-12);

    // BV values match a dense quadrature of |h''| for the closed form
    for (size_t i = 0; i < rep.members.size(); ++i) {
        const double cj = 1.0 / (1.0 + 1.0 / seq.indices[i]);
        const double bv_oracle = integrate(
            [&](double s) {
                const double f = cj * std::sin(s), fp = cj * std::cos(s),
                             fpp = -cj * std::sin(s);
                return std::abs(0.75 * fp * fp / std::sqrt(f) + 1.5 * std::sqrt(f) * fpp);
            },
            w.a_k, w.b_k, 32769);
        REQUIRE_THAT(rep.members[i].bv_hprime, WithinRel(bv_oracle, 1e-4));
    }

    // member dipping below 1/(2k) on the window is a precondition error
    SequenceSpec tiny = damped_sine();
    tiny.generator = [](int j) { return scaled_sine(j < 32 ? 0.2 : 1.0, kDefaultGrid); };
    REQUIRE_THROWS_AS(h1_convergence(tiny, w), PreconditionError);
}

TEST_CASE("distributional scalar inequality") {
    // round sphere: pointwise Scalar = 6 makes every bump pass with margin
    auto sphere = GridFunction::sample(0.0, kPi, kDefaultGrid,
                                       [](double s) { return std::sin(s); });
    const auto battery = default_bump_battery(0.02 * kPi, 0.98 * kPi);
    REQUIRE(battery.size() == 27);
    for (const auto& r : distributional_scalar_test(sphere, battery)) {
        REQUIRE(r.pass);
        REQUIRE(r.lhs - r.rhs > 0.0);
    }

    // flat cone: equality within quadrature noise
    auto cone = GridFunction::sample(0.0, 1.0, kDefaultGrid, [](double s) { return s; });
    for (const auto& r :
         distributional_scalar_test(cone, {TestFunction{0.5, 0.3}, TestFunction{0.4, 0.2}}))
        REQUIRE_THAT(r.lhs - r.rhs, WithinAbs(0.0, 1e-6));

    // manufactured negative-scalar window must fail a centered bump
    auto wavy = GridFunction::sample(0.0, kPi, kDefaultGrid, [](double s) {
        return std::sin(s) + 0.4 * std::sin(3.0 * s);
    });
    const auto res = distributional_scalar_test(wavy, {TestFunction{1.8, 0.2}});
    REQUIRE_FALSE(res[0].pass);
    REQUIRE(res[0].lhs < res[0].rhs);

    // support violations are rejected per test
    REQUIRE_THROWS_AS(distributional_scalar_test(sphere, {TestFunction{0.01, 0.2}}),
                      PreconditionError);
}

TEST_CASE("weak and strong formulations agree on nonnegative-scalar profiles") {
    for (int j : {1, 3}) {
        auto fj = extend_by_zero(collapsing_family(j), 2.0);
        const auto battery = default_bump_battery(0.3, 1.7);
        for (const auto& r : distributional_scalar_test(fj, battery)) REQUIRE(r.pass);
    }
}

TEST_CASE("tangent cone portrait") {
    auto sine = exact_limit([](double s) { return std::sin(s); }, kPi, 0.0, kPi);
    const auto smooth = tangent_cone_portrait(sine, 101);
    REQUIRE(smooth.euclidean_fraction == 1.0);
    REQUIRE(smooth.corners.empty());

    auto tent = exact_limit([](double s) { return std::min(s, 2.0 - s); }, 2.0, 0.0, 2.0);
    const auto creased = tangent_cone_portrait(tent, 101);
    REQUIRE(creased.corners.size() == 1);
    REQUIRE_THAT(creased.corners[0], WithinAbs(1.0, 1e-9));

    const auto damped = extract_limit(damped_sine());
    const auto portrait = tangent_cone_portrait(*damped.profile, 101);
    REQUIRE(portrait.euclidean_fraction >= 0.99);
}

TEST_CASE("pole volume ratios") {
    auto sine = exact_limit([](double s) { return std::sin(s); }, kPi, 0.0, kPi);
    const std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
    const auto ratios = pole_volume_ratio(sine, Pole::left, radii);
    // Richardson in r^2 settles to Scalar/30 = 0.2
    double r1 = (4.0 * ratios[1].second - ratios[0].second) / 3.0;
    double r2 = (4.0 * ratios[2].second - ratios[1].second) / 3.0;
    double r3 = (4.0 * ratios[3].second - ratios[2].second) / 3.0;
    REQUIRE_THAT((r1 + r2 + r3) / 3.0, WithinAbs(0.2, 1e-3));
    const auto right = pole_volume_ratio(sine, Pole::right, radii);
    REQUIRE_THAT(right.back().second, WithinAbs(0.2, 2e-3));

    // flat cap: identically zero
    auto cap = exact_limit([](double s) { return s; }, 1.0, 0.0, 1.0);
    for (const auto& [r, ratio] : pole_volume_ratio(cap, Pole::left, radii))
        REQUIRE_THAT(ratio, WithinAbs(0.0, 1e-10));

    // sub-unit slope at the pole: volume defect blows up positively
    auto cone9 = exact_limit([](double s) { return 0.9 * s; }, 1.0, 0.0, 1.0);
    const auto blow = pole_volume_ratio(cone9, Pole::left, radii);
    for (size_t i = 1; i < blow.size(); ++i) {
        REQUIRE(blow[i].second > 0.0);
        REQUIRE(blow[i].second > blow[i - 1].second);  // ~ (1 - 0.81)/r^2 growth
    }

    REQUIRE_THROWS_AS(pole_volume_ratio(sine, Pole::left, {2.0}), DomainError);
    REQUIRE_THROWS_AS(pole_volume_ratio(sine, Pole::left, {0.1, 0.2}), DomainError);
}

TEST_CASE("limit bounded by the cone profile near the poles") {
    // families passing the scalar checks satisfy f(s) <= s - a near the left pole
    const auto damped = extract_limit(damped_sine());
    const auto& prof = *damped.profile;
    const double span = prof.b_inf - prof.a_inf;
    for (double t = 0.001; t <= 0.05; t += 0.005) {
        const double s = prof.a_inf + t * span;
        REQUIRE(prof.f_inf(s) <= (s - prof.a_inf) * (1.0 + 1e-6) + 1e-9);
    }
}
