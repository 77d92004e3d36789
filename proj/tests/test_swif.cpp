#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "wsl/families.hpp"
#include "wsl/sequence.hpp"
#include "wsl/swif.hpp"

using namespace wsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;

IkWindow sphere_window(const RotSymManifold& m, int k) {
    const auto res = superlevel_window(m.grid(), k);
    REQUIRE(res.status == WindowStatus::ok);
    return res.window;
}
}  // namespace

TEST_CASE("epsilon of a window") {
    RotSymManifold m1(round_sphere(1.0));
    const IkWindow w = sphere_window(m1, 2);
    REQUIRE(epsilon_of_window(m1, m1, w) == 0.0);

    const double c = 1.0 + 1.0 / 8.0;
    RotSymManifold m2(scaled_sine(c));
    REQUIRE_THAT(epsilon_of_window(m1, m2, w), WithinRel(1.0 / 8.0, 1e-9));
    REQUIRE_THAT(epsilon_of_window(m2, m1, w), WithinRel(1.0 / 8.0, 1e-9));

    // sin vs sin + 0.01: the ratio peaks at the window edge, (0.5+0.01)/0.5
    const auto shifted = GridFunction::sample(0.0, kPi, kDefaultGrid, [](double s) {
        return std::sin(s) + 0.01;
    });
    RotSymManifold m3(WarpingFunction::sampled(shifted, "shifted"));
    REQUIRE_THAT(epsilon_of_window(m1, m3, w), WithinAbs(0.02, 1e-4));
}

TEST_CASE("window volumes of the unit sphere at k = 2") {
    RotSymManifold m(round_sphere(1.0));
    const IkWindow w = sphere_window(m, 2);
    const WindowGeometry g = window_volumes(m, w, kPi);

    REQUIRE_THAT(g.vol_W, WithinRel(18.600870627488465, 1e-8));     // 4pi(pi/3 + sqrt(3)/4)
    REQUIRE_THAT(g.area_bdry, WithinRel(2.0 * kPi, 1e-8));          // 8 pi (1/2)^2
    REQUIRE_THAT(g.vol_excess, WithinRel(1.1383381746902522, 1e-6));
    REQUIRE(g.margin_vol_excess >= 0.0);
    REQUIRE(g.margin_vol_W >= 0.0);
    REQUIRE(g.margin_area >= 0.0);

    // window covering the whole positive region drives the excess to zero
    const IkWindow big = sphere_window(m, 4096);
    const WindowGeometry gb = window_volumes(m, big, kPi);
    REQUIRE(gb.vol_excess < 1e-6);
}

TEST_CASE("a-priori window margins hold for manifolds passing the hypotheses") {
    for (const WarpingFunction& wf : {round_sphere(1.0), collapsing_family(1)}) {
        RotSymManifold m(wf);
        const double D = m.diameter();
        REQUIRE(m.validate_hypotheses(D, 1e-9).scalar_ok);
        for (int k : {3, 5, 9}) {
            if (1.0 / k >= m.grid().max()) continue;
            const auto res = superlevel_window(m.grid(), k);
            if (res.status != WindowStatus::ok) continue;
            const WindowGeometry g = window_volumes(m, res.window, D);
            REQUIRE(g.margin_vol_excess >= 0.0);
            REQUIRE(g.margin_vol_W >= 0.0);
            REQUIRE(g.margin_area >= 0.0);
        }
    }
}

TEST_CASE("self distance bound collapses with k") {
    RotSymManifold m(round_sphere(1.0));
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    double prev = 1e300;
    for (int k : {4, 8, 16, 32}) {
        const SwifBoundReport rep = swif_upper_bound(m, m, sphere_window(m, k), kPi, opts);
        REQUIRE(rep.epsilon == 0.0);
        REQUIRE(rep.lambda_used == 0.0);
        REQUIRE(rep.h_bar == 0.0);
        REQUIRE(rep.a == 0.0);
        REQUIRE(rep.bound > 0.0);
        REQUIRE(rep.bound < prev);
        prev = rep.bound;
        // the bound degenerates to the two excess terms
        REQUIRE_THAT(rep.bound,
                     WithinRel(rep.geom1.vol_excess + rep.geom2.vol_excess, 1e-12));
    }
    REQUIRE(prev < 0.05);
}

TEST_CASE("scaled-sphere bound: finite, decreasing in k, report invariants") {
    RotSymManifold m1(round_sphere(1.0));
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    double prev = 1e300;
    for (int k : {4, 8, 16}) {
        RotSymManifold m2(scaled_sine(1.0 + 1.0 / k));
        const IkWindow w = sphere_window(m1, k);
        const SwifBoundReport rep = swif_upper_bound(m1, m2, w, kPi, opts);

        REQUIRE_THAT(rep.epsilon, WithinRel(1.0 / k, 1e-9));
        REQUIRE_THAT(rep.lambda_used, WithinRel((2.0 * kPi + 8.0 * kPi) / (k - 1.0), 1e-12));
        REQUIRE(rep.lambda_lower <= rep.lambda_upper);
        // report invariants from the bound assembly
        REQUIRE_THAT(rep.h, WithinRel(std::sqrt(rep.lambda_used * (rep.D0 + rep.lambda_used / 4.0)),
                                      1e-12));
        REQUIRE(rep.h_inequality_ok);  // lambda <= 4 D0 at these k
        REQUIRE_THAT(rep.h_bar,
                     WithinRel(std::max(rep.h, rep.D0 * std::sqrt(rep.epsilon * rep.epsilon +
                                                                  2.0 * rep.epsilon)),
                               1e-12));
        REQUIRE_THAT(rep.a, WithinRel(std::acos(1.0 / (1.0 + rep.epsilon)) * rep.D0 / kPi, 1e-12));
        const double bulk = rep.geom1.vol_W + rep.geom2.vol_W + rep.geom1.area_bdry +
                            rep.geom2.area_bdry;
        REQUIRE_THAT(rep.bound,
                     WithinRel((2.0 * rep.h_bar + rep.a) * bulk + rep.geom1.vol_excess +
                                   rep.geom2.vol_excess,
                               1e-12));
        REQUIRE(rep.bound >= 0.0);
        REQUIRE(rep.bound < prev);
        prev = rep.bound;
    }
}

TEST_CASE("sampled lambda mode is exploratory") {
    RotSymManifold m1(round_sphere(1.0));
    RotSymManifold m2(scaled_sine(1.125));
    const IkWindow w = sphere_window(m1, 8);
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    opts.lambda_mode = SwifOptions::LambdaMode::sampled;
    const SwifBoundReport rep = swif_upper_bound(m1, m2, w, kPi, opts);
    REQUIRE_FALSE(rep.lambda_certified);
    REQUIRE(rep.lambda_used == rep.lambda_lower);
    REQUIRE(rep.lambda_used <= rep.lambda_upper);
}

TEST_CASE("bound is monotone in the admissible a") {
    RotSymManifold m1(round_sphere(1.0));
    RotSymManifold m2(scaled_sine(1.125));
    const IkWindow w = sphere_window(m1, 8);
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    const SwifBoundReport base = swif_upper_bound(m1, m2, w, kPi, opts);
    SwifOptions bigger = opts;
    bigger.a_override = base.a * 2.0 + 0.1;
    REQUIRE(swif_upper_bound(m1, m2, w, kPi, bigger).bound > base.bound);
    SwifOptions tooSmall = opts;
    tooSmall.a_override = base.a * 0.5;
    REQUIRE_THROWS_AS(swif_upper_bound(m1, m2, w, kPi, tooSmall), PreconditionError);
}

TEST_CASE("bound shrinks as the window grows under frozen eps and lambda") {
    RotSymManifold m(round_sphere(1.0));
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    opts.epsilon_override = 1e-3;
    opts.lambda_override = 1e-3;
    double prev = 1e300;
    for (int k : {4, 8, 16}) {
        const SwifBoundReport rep = swif_upper_bound(m, m, sphere_window(m, k), kPi, opts);
        REQUIRE(rep.bound < prev);
        prev = rep.bound;
    }
}

TEST_CASE("small-lambda regime caps the neck height") {
    RotSymManifold m(round_sphere(1.0));
    for (int k : {4, 8, 16}) {
        SwifOptions opts;
        opts.n_pairs = 64;
        opts.resolution = 128;
        opts.lambda_override = m.diameter() / (k + 1.0);  // subsequence-scale lambda
        opts.epsilon_override = 1.0 / (k + 1.0);
        const SwifBoundReport rep =
            swif_upper_bound(m, m, sphere_window(m, k), kPi, opts);
        REQUIRE(rep.h_bar <= 2.0 * rep.D0 / std::sqrt(k + 1.0) + 1e-12);
    }
}

TEST_CASE("rate certificate") {
    // frozen against an independent high-precision evaluation
    REQUIRE_THAT(rate_certificate(2.0, 2.0, 4, 0), WithinRel(2087.3763656985046, 1e-12));
    // long-double re-evaluation oracle
    const long double bulk = (4.0L * 2.0L + 2.0L * 2.0L / std::sqrt((long double)kPi)) *
                                 (8.0L * (long double)kPi * 8.0L +
                                  16.0L * (long double)kPi * 4.0L) +
                             8.0L * (long double)kPi * 2.0L;
    REQUIRE_THAT(rate_certificate(2.0, 2.0, 4, 1),
                 WithinRel(static_cast<double>(bulk / std::sqrt(5.0L)), 1e-12));

    double prev = 1e300;
    for (int i = 0; i < 40; ++i) {
        const double v = rate_certificate(2.0, 2.0, 4, i);
        REQUIRE(v < prev);
        prev = v;
    }
    REQUIRE(rate_certificate(2.0, 2.0, 4, 400000000) < 0.25);
    REQUIRE_THROWS_AS(rate_certificate(-1.0, 2.0, 4, 0), PreconditionError);
}

TEST_CASE("self distance can be driven below any target") {
    RotSymManifold m(round_sphere(1.0));
    SwifOptions opts;
    opts.n_pairs = 64;
    opts.resolution = 128;
    const double target = 1e-3;
    bool reached = false;
    for (int k : {8, 32, 128, 512}) {
        const SwifBoundReport rep = swif_upper_bound(m, m, sphere_window(m, k), kPi, opts);
        if (rep.bound < target) {
            reached = true;
            break;
        }
    }
    REQUIRE(reached);
}
