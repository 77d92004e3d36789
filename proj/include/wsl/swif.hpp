#pragma once

#include <map>
#include <optional>
#include <string>

#include "wsl/distance.hpp"
#include "wsl/manifold.hpp"
#include "wsl/window.hpp"

namespace wsl {

/// Window geometry of one manifold plus margins against the a-priori bounds
/// Vol(M \ W) <= 16 pi D / k^2, Vol(W) <= 4 pi D^3, Area(bdry W) <= 8 pi D^2.
struct WindowGeometry {
    double vol_W = 0.0;
    double area_bdry = 0.0;
    double vol_excess = 0.0;
    double margin_vol_excess = 0.0;
    double margin_vol_W = 0.0;
    double margin_area = 0.0;
};

WindowGeometry window_volumes(const RotSymManifold& m, const IkWindow& window, double D);

/// Smallest eps with g1 <= (1+eps)^2 g2 and g2 <= (1+eps)^2 g1 on the window
/// under the shared (s, theta) identification: max of the warping ratios - 1.
double epsilon_of_window(const RotSymManifold& m1, const RotSymManifold& m2,
                         const IkWindow& window);

struct SwifOptions {
    enum class LambdaMode { certified, sampled };
    LambdaMode lambda_mode = LambdaMode::certified;
    std::optional<double> lambda_override;   // exploratory reports only
    std::optional<double> epsilon_override;
    std::optional<double> a_override;        // must be >= the minimal admissible a
    int n_pairs = 512;
    Eigen::Index resolution = 512;
};

/// All ingredients of the flat-distance upper bound
///   (2 hbar + a)[Vol W_1 + Vol W_2 + Area bdry W_1 + Area bdry W_2]
///   + Vol(M_1 \ W_1) + Vol(M_2 \ W_2)
/// with h = sqrt(lambda (D0 + lambda/4)), hbar = max{h, D0 sqrt(eps^2+2eps)},
/// a >= arccos((1+eps)^{-1}) D0 / pi.
struct SwifBoundReport {
    int k = 0;
    double epsilon = 0.0;
    double lambda_lower = 0.0;
    double lambda_upper = 0.0;
    double lambda_used = 0.0;
    bool lambda_certified = true;
    double h = 0.0;
    double h_bar = 0.0;
    double a = 0.0;
    double D0 = 0.0;
    IkWindow window;
    WindowGeometry geom1, geom2;
    double bound = 0.0;
    bool h_inequality_ok = true;  // h <= sqrt(2 lambda D0) for the lambda used
    std::map<std::string, double> term_breakdown;
    DistortionSample lambda_argmax;
};

SwifBoundReport swif_upper_bound(const RotSymManifold& m1, const RotSymManifold& m2,
                                 const IkWindow& window, double D_cap,
                                 const SwifOptions& opts = {});

/// Closed-form convergence-rate certificate
///   (1/sqrt(k+i)) [ (4 D0 + 2 D / sqrt(pi)) (8 pi D^3 + 16 pi D^2) + 8 pi D ].
double rate_certificate(double D, double D0, int k, int i);

}  // namespace wsl
