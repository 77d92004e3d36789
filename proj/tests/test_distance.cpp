#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "wsl/distance.hpp"
#include "wsl/families.hpp"
#include "wsl/sequence.hpp"

using namespace wsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;

// ambient chord distance on the unit round S^3 (embedding oracle)
double s3_distance(double s1, double s2, double dtheta) {
    const double c = std::cos(s1) * std::cos(s2) + std::sin(s1) * std::sin(s2) * std::cos(dtheta);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

SurfacePoint pt(double s, double azimuth, double polar = kPi / 2.0) {
    return {s, azimuth, polar};
}
}  // namespace

TEST_CASE("pole-to-pole distance is the diameter") {
    RotSymManifold m(round_sphere(1.0));
    DistanceQuery q{pt(0.0, 0.0), pt(kPi, 0.0), 256};
    REQUIRE_THAT(geodesic_distance(m, q), WithinAbs(kPi, 1e-9));
}

TEST_CASE("identity and meridian reductions are exact") {
    RotSymManifold m(round_sphere(1.0));
    REQUIRE(geodesic_distance(m, {pt(1.0, 0.3), pt(1.0, 0.3), 64}) == 0.0);
    REQUIRE_THAT(geodesic_distance(m, {pt(0.4, 0.7), pt(2.1, 0.7), 64}),
                 WithinAbs(1.7, 1e-12));
}

TEST_CASE("equatorial distance matches the angular separation") {
    RotSymManifold m(round_sphere(1.0));
    DistanceQuery q{pt(kPi / 2.0, 0.0), pt(kPi / 2.0, 1.0), 512};
    REQUIRE_THAT(geodesic_distance(m, q), WithinRel(1.0, 0.01));
}

TEST_CASE("mesh distances track the ambient oracle within the error budget") {
    RotSymManifold m(round_sphere(1.0));
    struct Probe { double s1, s2, dth; };
    for (const Probe& p : {Probe{1.0, 2.0, 0.7}, Probe{0.3, 2.9, 3.0}, Probe{0.8, 0.8, kPi},
                           Probe{1.2, 2.2, 2.0}}) {
        DistanceQuery q{pt(p.s1, 0.0), pt(p.s2, p.dth), 256};
        const double want = s3_distance(p.s1, p.s2, p.dth);
        REQUIRE_THAT(geodesic_distance(m, q), WithinRel(want, kMeshErrorBound));
    }
}

TEST_CASE("metric axioms on sampled configurations") {
    RotSymManifold m(round_sphere(1.0));
    const SurfacePoint a = pt(0.9, 0.0), b = pt(1.8, 1.3), c = pt(2.4, 2.6, 1.2);
    const Eigen::Index res = 192;
    const double dab = geodesic_distance(m, {a, b, res});
    const double dba = geodesic_distance(m, {b, a, res});
    const double dbc = geodesic_distance(m, {b, c, res});
    const double dac = geodesic_distance(m, {a, c, res});
    REQUIRE_THAT(dab, WithinRel(dba, 1e-12));
    REQUIRE(dab >= std::abs(a.s - b.s));
    REQUIRE(dac <= dab + dbc + 2.0 * kMeshErrorBound * (dab + dbc));

    // distance never exceeds the diameter (through-pole routes are in-graph)
    for (double dth : {0.5, 1.5, 3.0})
        REQUIRE(geodesic_distance(m, {pt(0.2, 0.0), pt(3.0, dth), res}) <=
                m.diameter() + 1e-9);
}

TEST_CASE("mesh refinement settles to first order") {
    RotSymManifold m(round_sphere(1.0));
    DistanceQuery q{pt(1.0, 0.0), pt(2.0, 0.7), 128};
    const double d128 = geodesic_distance(m, q);
    q.resolution = 256;
    const double d256 = geodesic_distance(m, q);
    REQUIRE(std::abs(d256 - d128) <= kMeshErrorBound * d128);
}

TEST_CASE("diameter check: analytic vs sampled") {
    RotSymManifold sphere(round_sphere(1.0));
    const auto [exact_s, sampled_s] = diameter_check(sphere, 160);
    REQUIRE(exact_s == kPi);
    REQUIRE(sampled_s <= exact_s * (1.0 + kMeshErrorBound));
    REQUIRE(sampled_s >= exact_s * (1.0 - 1e-9));  // d(N,S) is in the sample set

    RotSymManifold c1(collapsing_family(1));
    const auto [exact_c, sampled_c] = diameter_check(c1, 160);
    REQUIRE(exact_c == 2.0);
    REQUIRE(sampled_c <= 2.0 * (1.0 + kMeshErrorBound));

    LakzianParams p;
    p.delta = 0.2;
    p.L_spline = 1.0;
    const auto prof = lakzian_family(p);
    RotSymManifold lak(prof.warping);
    const auto [exact_l, sampled_l] = diameter_check(lak, 160);
    REQUIRE(exact_l == prof.warping.domain_end());
    REQUIRE(sampled_l <= exact_l * (1.0 + kMeshErrorBound));
}

TEST_CASE("lambda estimate: identical manifolds certify zero") {
    RotSymManifold m(round_sphere(1.0));
    const IkWindow w = superlevel_window(m.grid(), 4).window;
    const LambdaEstimate est = lambda_estimate(m, m, w, 64, 128);
    REQUIRE(est.lower == 0.0);
    REQUIRE(est.analytic_upper == 0.0);
}

TEST_CASE("lambda estimate: certified bound and conformal gap control") {
    RotSymManifold m1(round_sphere(1.0));
    const int k = 11;
    RotSymManifold m2(scaled_sine(1.0 + 1.0 / k));
    const IkWindow w = superlevel_window(m1.grid(), k).window;

    const LambdaEstimate est = lambda_estimate(m1, m2, w, 64, 128);
    REQUIRE_THAT(est.analytic_upper, WithinRel((2.0 * kPi + 8.0 * kPi) / (k - 1.0), 1e-12));
    REQUIRE(est.lower <= est.analytic_upper);
    REQUIRE(est.lower > 0.0);

    // conformal pairs: every sampled gap <= (c - 1) d_1 + mesh tolerance
    const double c = 1.0 + 1.0 / k;
    REQUIRE(est.argmax.gap <=
            (c - 1.0) * est.argmax.d_in_first +
                2.0 * kMeshErrorBound * std::max(est.argmax.d_in_first, est.argmax.d_in_second) +
                1e-9);
    // sampled distances respect the meridian lower bound
    REQUIRE(est.argmax.d_in_first >= std::abs(est.argmax.s_x - est.argmax.s_y) - 1e-9);
}

TEST_CASE("conformal pairs: every sampled gap obeys the scaling bound") {
    const double c = 1.1;
    RotSymManifold m1(round_sphere(1.0));
    RotSymManifold m2(scaled_sine(c));
    struct P { double s1, s2, dth; };
    for (const P& p : {P{0.8, 1.3, 0.4}, P{1.1, 2.0, 1.2}, P{0.6, 2.6, 2.4},
                       P{1.5707, 1.5707, 2.0}}) {
        DistanceQuery q{pt(p.s1, 0.0), pt(p.s2, p.dth), 128};
        const double d1 = geodesic_distance(m1, q);
        const double d2 = geodesic_distance(m2, q);
        REQUIRE(std::abs(d2 - d1) <=
                (c - 1.0) * d1 + 2.0 * kMeshErrorBound * std::max(d1, d2) + 1e-12);
    }
}

TEST_CASE("query resolution precondition") {
    RotSymManifold m(round_sphere(1.0));
    REQUIRE_THROWS_AS(geodesic_distance(m, {pt(1.0, 0.0), pt(2.0, 0.5), 32}),
                      PreconditionError);
}

TEST_CASE("lambda estimate rejects bad windows") {
    RotSymManifold m(round_sphere(1.0));
    const IkWindow good = superlevel_window(m.grid(), 4).window;
    IkWindow outside = good;
    outside.b_k = 2.0 * kPi;
    REQUIRE_THROWS_AS(lambda_estimate(m, m, outside, 64, 128), DomainError);

    IkWindow hungry = good;
    hungry.k = 40;  // claims f >= 1/40 where the window only guarantees 1/4
    hungry.a_k = 0.01;
    REQUIRE_THROWS_AS(lambda_estimate(m, m, hungry, 64, 128), PreconditionError);

    REQUIRE_THROWS_AS(lambda_estimate(m, m, good, 4, 128), PreconditionError);
}

TEST_CASE("disconnected profiles are reported") {
    // f vanishes on an interior plateau: the two halves cannot be joined
    const Eigen::Index n = 2049;
    Eigen::ArrayXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = 4.0 * static_cast<double>(i) / (n - 1);
        v[i] = std::max(0.0, std::sin(s) - 0.5);  // zero band around s = pi
    }
    WarpingFunction wf = WarpingFunction::sampled(GridFunction(0.0, 4.0, v));
    RotSymManifold m(wf);
    REQUIRE_THROWS_AS(geodesic_distance(m, {pt(0.9, 0.0), pt(3.4, 1.0), 64}),
                      DisconnectedRegionError);
}
