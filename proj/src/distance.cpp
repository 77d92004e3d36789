#include "wsl/distance.hpp"

#include <cmath>
#include <numbers>
#include <queue>

namespace wsl {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;  // 1/phi
constexpr double kPlastic1 = 0.7548776662466927;  // plastic-number 2D sequence
constexpr double kPlastic2 = 0.5698402909980532;

double frac(double x) { return x - std::floor(x); }
}  // namespace

Eigen::Vector3d SurfacePoint::direction() const {
    const double sp = std::sin(polar);
    return {sp * std::cos(azimuth), sp * std::sin(azimuth), std::cos(polar)};
}

SurfacePoint SurfacePoint::from_degrees(double s, double azimuth_deg, double elevation_deg) {
    const double az = azimuth_deg * kPi / 180.0;
    const double polar = (90.0 - elevation_deg) * kPi / 180.0;
    return {s, az, polar};
}

double angular_separation(const SurfacePoint& p, const SurfacePoint& q) {
    const double c = std::clamp(p.direction().dot(q.direction()), -1.0, 1.0);
    return std::acos(c);
}

GeodesicMesh::GeodesicMesh(const RotSymManifold& m, double alpha_max, Eigen::Index rows,
                           Eigen::Index cols)
    : L_(m.diameter()), alpha_max_(alpha_max), R_(rows), C_(cols) {
    if (R_ < 8 || C_ < 1) throw PreconditionError("GeodesicMesh needs rows >= 8, cols >= 1");
    hs_ = L_ / static_cast<double>(R_);
    ha_ = alpha_max_ / static_cast<double>(C_);
    f_half_.resize(2 * R_ + 1);
    for (Eigen::Index j = 0; j <= 2 * R_; ++j) {
        const double s = std::min(L_, 0.5 * hs_ * static_cast<double>(j));
        f_half_[j] = std::max(0.0, m.f(s));
    }
    n_vertices_ = 2 + (R_ - 1) * (C_ + 1);
}

Eigen::Index GeodesicMesh::balanced_cols(const RotSymManifold& m, double alpha_max,
                                         Eigen::Index rows) {
    const double hs = m.diameter() / static_cast<double>(rows);
    const double span = alpha_max * m.grid().max();
    const auto c = static_cast<Eigen::Index>(std::ceil(span / hs));
    return std::clamp<Eigen::Index>(c, 8, 4 * rows);
}

Eigen::Index GeodesicMesh::vertex(Eigen::Index row, Eigen::Index col) const {
    if (row == 0) return 0;
    if (row == R_) return 1;
    return 2 + (row - 1) * (C_ + 1) + col;
}

Eigen::Index GeodesicMesh::nearest_row(double s) const {
    const auto r = static_cast<Eigen::Index>(std::lround(s / hs_));
    return std::clamp<Eigen::Index>(r, 0, R_);
}

Eigen::Index GeodesicMesh::nearest_col(double alpha) const {
    const auto c = static_cast<Eigen::Index>(std::lround(alpha / ha_));
    return std::clamp<Eigen::Index>(c, 0, C_);
}

double GeodesicMesh::edge_length(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2,
                                 Eigen::Index c2) const {
    const double ds = static_cast<double>(r2 - r1) * hs_;
    const double da = static_cast<double>(c2 - c1) * ha_;
    const double fmid = f_half_[r1 + r2];  // profile at the midpoint row
    return std::hypot(ds, fmid * da);
}

Eigen::VectorXd GeodesicMesh::distances_from(Eigen::Index source_vertex) const {
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(n_vertices_, 1e300);
    using Item = std::pair<double, Eigen::Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source_vertex] = 0.0;
    pq.emplace(0.0, source_vertex);

    static constexpr int kOff[16][2] = {
        {1, 0},  {-1, 0},  {0, 1},  {0, -1},  {1, 1},  {1, -1},  {-1, 1},  {-1, -1},
        {1, 2},  {1, -2},  {-1, 2}, {-1, -2}, {2, 1},  {2, -1},  {-2, 1},  {-2, -1}};

    auto relax = [&](Eigen::Index v, double nd) {
        if (nd < dist[v]) {
            dist[v] = nd;
            pq.emplace(nd, v);
        }
    };

    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == 0) {  // north pole connects to the whole first row
            for (Eigen::Index k = 0; k <= C_; ++k) relax(vertex(1, k), d + hs_);
            continue;
        }
        if (u == 1) {  // south pole, last interior row
            for (Eigen::Index k = 0; k <= C_; ++k) relax(vertex(R_ - 1, k), d + hs_);
            continue;
        }
        const Eigen::Index row = 1 + (u - 2) / (C_ + 1);
        const Eigen::Index col = (u - 2) % (C_ + 1);
        for (const auto& o : kOff) {
            const Eigen::Index r2 = row + o[0];
            const Eigen::Index c2 = col + o[1];
            if (c2 < 0 || c2 > C_) continue;
            if (r2 <= 0) {
                relax(vertex(0, 0), d + static_cast<double>(row) * hs_);
                continue;
            }
            if (r2 >= R_) {
                relax(vertex(R_, 0), d + static_cast<double>(R_ - row) * hs_);
                continue;
            }
            relax(vertex(r2, c2), d + edge_length(row, col, r2, c2));
        }
    }
    return dist;
}

namespace {

bool at_pole(double s, double L) {
    return s <= 1e-12 * L || s >= L * (1.0 - 1e-12);
}

void check_connectivity(const RotSymManifold& m, double s_lo, double s_hi) {
    // the formula space pinches where f vanishes on an interior interval
    const auto& g = m.grid();
    const double guard = m.pole_guard();
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double s = g.node(i);
        if (s > s_lo && s < s_hi && g.value(i) <= guard && !at_pole(s, m.diameter()))
            throw DisconnectedRegionError(
                "profile vanishes between the query points; region disconnected");
    }
}

}  // namespace

double geodesic_distance(const RotSymManifold& m, const DistanceQuery& q) {
    if (q.resolution < 64) throw PreconditionError("distance query resolution must be >= 64");
    const double L = m.diameter();
    for (double s : {q.p.s, q.q.s})
        if (s < 0.0 || s > L) throw DomainError("query point outside [0, L]");

    const double dtheta = angular_separation(q.p, q.q);
    const double ds = std::abs(q.p.s - q.q.s);
    check_connectivity(m, std::min(q.p.s, q.q.s), std::max(q.p.s, q.q.s));

    // meridian queries and pole endpoints reduce exactly to |delta s|
    if (dtheta < 1e-12 || at_pole(q.p.s, L) || at_pole(q.q.s, L)) return ds;

    GeodesicMesh mesh(m, dtheta, q.resolution,
                      GeodesicMesh::balanced_cols(m, dtheta, q.resolution));
    const Eigen::Index src = mesh.vertex(mesh.nearest_row(q.p.s), 0);
    const Eigen::Index tgt = mesh.vertex(mesh.nearest_row(q.q.s), mesh.cols());
    if (src == tgt) return 0.0;
    return mesh.distances_from(src)[tgt];
}

std::pair<double, double> diameter_check(const RotSymManifold& m, Eigen::Index resolution) {
    const double L = m.diameter();
    const double analytic = L;

    // sample set: poles plus Fibonacci directions at quartile heights
    constexpr int kDirs = 8;
    std::vector<SurfacePoint> pts;
    pts.push_back({0.0, 0.0, 0.0});
    pts.push_back({L, 0.0, 0.0});
    for (double frac_s : {0.25, 0.5, 0.75})
        for (int d = 0; d < kDirs; ++d) {
            const double z = 1.0 - 2.0 * (d + 0.5) / kDirs;
            const double az = 2.0 * kPi * frac(static_cast<double>(d) * kGolden);
            pts.push_back({frac_s * L, az, std::acos(z)});
        }

    GeodesicMesh mesh(m, kPi, resolution, GeodesicMesh::balanced_cols(m, kPi, resolution));
    double best = L;  // d(N, S) = L is always realized
    for (size_t a = 0; a < pts.size(); ++a) {
        if (at_pole(pts[a].s, L)) continue;
        const Eigen::VectorXd field =
            mesh.distances_from(mesh.vertex(mesh.nearest_row(pts[a].s), 0));
        for (size_t b = a + 1; b < pts.size(); ++b) {
            double d;
            if (at_pole(pts[b].s, L)) {
                d = std::abs(pts[a].s - pts[b].s);
            } else {
                const double dth = angular_separation(pts[a], pts[b]);
                d = field[mesh.vertex(mesh.nearest_row(pts[b].s), mesh.nearest_col(dth))];
            }
            best = std::max(best, d);
        }
    }
    return {analytic, best};
}

LambdaEstimate lambda_estimate(const RotSymManifold& m1, const RotSymManifold& m2,
                               const IkWindow& window, int n_pairs, Eigen::Index resolution) {
    if (n_pairs < 16) throw PreconditionError("lambda_estimate needs n_pairs >= 16");
    if (window.k < 2) throw PreconditionError("lambda_estimate needs k >= 2");
    const double L1 = m1.diameter(), L2 = m2.diameter();
    if (window.a_k < 0.0 || window.b_k > std::min(L1, L2) || !(window.b_k > window.a_k))
        throw DomainError("lambda window not contained in both manifolds");
    const double floor_k = (1.0 / window.k) * (1.0 - 1e-9);
    for (const RotSymManifold* m : {&m1, &m2}) {
        const Eigen::Index probes = 512;
        for (Eigen::Index i = 0; i <= probes; ++i) {
            const double s = window.a_k + window.width() * i / probes;
            if (m->f(s) < floor_k)
                throw PreconditionError("warping function drops below 1/k on the window");
        }
    }

    LambdaEstimate est;
    est.n_pairs = n_pairs;
    const bool identical = m1.warping().same_profile(m2.warping());
    est.analytic_upper = identical ? 0.0 : (L1 + L2 + 8.0 * kPi) / (window.k - 1.0);

    GeodesicMesh mesh1(m1, kPi, resolution,
                       GeodesicMesh::balanced_cols(m1, kPi, resolution));
    GeodesicMesh mesh2(m2, kPi, resolution,
                       GeodesicMesh::balanced_cols(m2, kPi, resolution));

    const int n_src = std::clamp(n_pairs / 64, 1, 64);
    const int n_tgt = (n_pairs + n_src - 1) / n_src;
    int made = 0;
    for (int t = 0; t < n_src && made < n_pairs; ++t) {
        const double sx = window.a_k + frac((t + 0.5) * kGolden) * window.width();
        const Eigen::Index row1 = mesh1.nearest_row(sx);
        const Eigen::Index row2 = mesh2.nearest_row(sx);
        const Eigen::VectorXd f1 = mesh1.distances_from(mesh1.vertex(row1, 0));
        const Eigen::VectorXd f2 = mesh2.distances_from(mesh2.vertex(row2, 0));
        for (int u = 0; u < n_tgt && made < n_pairs; ++u, ++made) {
            const int seq = t * n_tgt + u;
            const double sy = window.a_k + frac((seq + 1) * kPlastic1) * window.width();
            const double dth = frac((seq + 1) * kPlastic2) * kPi;
            const double d1 =
                f1[mesh1.vertex(mesh1.nearest_row(sy), mesh1.nearest_col(dth))];
            const double d2 =
                f2[mesh2.vertex(mesh2.nearest_row(sy), mesh2.nearest_col(dth))];
            const double gap = std::abs(d1 - d2);
            if (gap > est.lower) {
                est.lower = gap;
                est.argmax = {sx, sy, dth, d1, d2, gap};
            }
        }
    }
    if (identical) est.lower = 0.0;  // equal meshes; guards roundoff only
    return est;
}

}  // namespace wsl
