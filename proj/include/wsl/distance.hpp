#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wsl/manifold.hpp"
#include "wsl/window.hpp"

namespace wsl {

/// Relative error budget of the 16-neighbor shortest-path mesh (stencil
/// anisotropy plus metric sampling).
inline constexpr double kMeshErrorBound = 0.03;

/// A point (s, theta) of the manifold; theta is a unit direction on S^2
/// stored as an azimuth/polar pair.
struct SurfacePoint {
    double s = 0.0;
    double azimuth = 0.0;  // radians
    double polar = 0.0;    // radians from the +z axis, in [0, pi]

    Eigen::Vector3d direction() const;
    static SurfacePoint from_degrees(double s, double azimuth_deg, double elevation_deg);
};

/// Angle between the sphere directions of two points, in [0, pi].
double angular_separation(const SurfacePoint& p, const SurfacePoint& q);

struct DistanceQuery {
    SurfacePoint p, q;
    Eigen::Index resolution = 512;  // >= 64
};

/// Structured mesh on [0, L] x [0, alpha_max] with collapsed pole vertices
/// and 16-neighbor edges weighted by the midpoint metric ds^2 + f^2 dalpha^2.
class GeodesicMesh {
public:
    GeodesicMesh(const RotSymManifold& m, double alpha_max, Eigen::Index rows,
                 Eigen::Index cols);

    /// Column count that keeps cells metrically square at the profile's peak
    /// (the stencil's direction coverage needs comparable edge lengths).
    static Eigen::Index balanced_cols(const RotSymManifold& m, double alpha_max,
                                      Eigen::Index rows);

    Eigen::Index rows() const { return R_; }
    Eigen::Index cols() const { return C_; }
    double row_spacing() const { return hs_; }
    double col_spacing() const { return ha_; }

    Eigen::Index vertex(Eigen::Index row, Eigen::Index col) const;
    Eigen::Index nearest_row(double s) const;
    Eigen::Index nearest_col(double alpha) const;

    /// Single-source shortest-path field (Dijkstra).
    Eigen::VectorXd distances_from(Eigen::Index source_vertex) const;

    double edge_length(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2,
                       Eigen::Index c2) const;

private:
    double L_, alpha_max_, hs_, ha_;
    Eigen::Index R_, C_;
    Eigen::ArrayXd f_half_;  // profile at multiples of hs/2
    Eigen::Index n_vertices_;
};

/// Length of the shortest path between two surface points, by shortest-path
/// search on the totally geodesic 2-surface of revolution through them.
double geodesic_distance(const RotSymManifold& m, const DistanceQuery& q);

/// (analytic, sampled) diameter: the exact domain end and the max mesh
/// distance over poles plus Fibonacci-direction samples at quartile heights.
std::pair<double, double> diameter_check(const RotSymManifold& m,
                                         Eigen::Index resolution = 256);

/// One sampled pair of the distance-distortion functional.
struct DistortionSample {
    double s_x = 0.0, s_y = 0.0, dtheta = 0.0;
    double d_in_first = 0.0, d_in_second = 0.0;
    double gap = 0.0;
};

struct LambdaEstimate {
    double lower = 0.0;           // max sampled gap (approaches the sup from below)
    double analytic_upper = 0.0;  // certified bound (L1 + L2 + 8 pi)/(k - 1)
    DistortionSample argmax;
    int n_pairs = 0;
};

/// Distance-distortion statistics of two manifolds over a shared window,
/// under the common (s, theta) identification.
LambdaEstimate lambda_estimate(const RotSymManifold& m1, const RotSymManifold& m2,
                               const IkWindow& window, int n_pairs = 512,
                               Eigen::Index resolution = 512);

}  // namespace wsl
