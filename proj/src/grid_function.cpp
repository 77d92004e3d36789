#include "wsl/grid_function.hpp"

#include <cmath>
#include <vector>

namespace wsl {

GridFunction::GridFunction(double lo, double hi, Eigen::ArrayXd values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
    const Eigen::Index n = values_.size();
    if (n < 2) throw ShapeError("GridFunction needs at least 2 samples");
    if (!(hi > lo)) throw ShapeError("GridFunction interval must have hi > lo");
    if (!values_.isFinite().all()) throw ShapeError("GridFunction samples must be finite");
    spacing_ = (hi_ - lo_) / static_cast<double>(n - 1);
    build_slopes();
}

GridFunction GridFunction::sample(double lo, double hi, Eigen::Index n,
                                  const std::function<double(double)>& f) {
    if (n < 2) throw ShapeError("GridFunction::sample needs n >= 2");
    Eigen::ArrayXd v(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = (i == n - 1) ? hi : lo + h * static_cast<double>(i);
        v[i] = f(s);
    }
    return GridFunction(lo, hi, std::move(v));
}

void GridFunction::build_slopes() {
    // Fritsch-Carlson shape-preserving slopes on a uniform grid. Linear data
    // reproduce exactly; monotone data yield a monotone interpolant.
    const Eigen::Index n = values_.size();
    slopes_.resize(n);
    Eigen::ArrayXd d(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) d[i] = (values_[i + 1] - values_[i]) / spacing_;

    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (d[i - 1] == 0.0 || d[i] == 0.0 || std::signbit(d[i - 1]) != std::signbit(d[i])) {
            slopes_[i] = 0.0;
        } else {
            slopes_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
        }
    }
    // Shape-preserving one-sided end slopes (clamped three-point rule).
    auto end_slope = [](double d0, double d1) {
        double m = 1.5 * d0 - 0.5 * d1;
        if (m * d0 <= 0.0) return 0.0;
        if (std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    };
    slopes_[0] = (n == 2) ? d[0] : end_slope(d[0], d[1]);
    slopes_[n - 1] = (n == 2) ? d[n - 2] : end_slope(d[n - 2], d[n - 3]);
}

double GridFunction::operator()(double s) const {
    if (s < lo_ - 1e-12 * (hi_ - lo_) || s > hi_ + 1e-12 * (hi_ - lo_))
        throw DomainError("GridFunction evaluation outside interval");
    s = std::clamp(s, lo_, hi_);
    const Eigen::Index n = values_.size();
    Eigen::Index i = static_cast<Eigen::Index>((s - lo_) / spacing_);
    i = std::clamp<Eigen::Index>(i, 0, n - 2);
    const double t = (s - node(i)) / spacing_;
    if (t == 0.0) return values_[i];
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * values_[i] + h10 * spacing_ * slopes_[i] + h01 * values_[i + 1] +
           h11 * spacing_ * slopes_[i + 1];
}

GridFunction GridFunction::derivative(int order) const {
    if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
    const Eigen::Index n = values_.size();
    if (n < 6) throw ShapeError("derivative grids need at least 6 samples");
    Eigen::ArrayXd out(n);
    const double h = spacing_;

    // 4th-order offset stencils at the two nodes nearest each end, computed
    // once from Fornberg weights on unit nodes {0..4} / {0..5}.
    static const std::vector<double> unit5 = {0, 1, 2, 3, 4};
    static const std::vector<double> unit6 = {0, 1, 2, 3, 4, 5};
    static const Eigen::ArrayXd w1_at0 = fd_weights(0.0, unit5, 1);
    static const Eigen::ArrayXd w1_at1 = fd_weights(1.0, unit5, 1);
    static const Eigen::ArrayXd w2_at0 = fd_weights(0.0, unit6, 2);
    static const Eigen::ArrayXd w2_at1 = fd_weights(1.0, unit6, 2);

    auto apply_fwd = [&](const Eigen::ArrayXd& w, double scale) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < w.size(); ++j) acc += w[j] * values_[j];
        return acc * scale;
    };
    auto apply_bwd = [&](const Eigen::ArrayXd& w, double scale) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < w.size(); ++j) acc += w[j] * values_[n - 1 - j];
        return acc * scale;
    };

    if (order == 1) {
        const double inv = 1.0 / h;
        out[0] = apply_fwd(w1_at0, inv);
        out[1] = apply_fwd(w1_at1, inv);
        out[n - 1] = -apply_bwd(w1_at0, inv);
        out[n - 2] = -apply_bwd(w1_at1, inv);
        for (Eigen::Index i = 2; i + 2 < n; ++i)
            out[i] = (values_[i - 2] - 8.0 * values_[i - 1] + 8.0 * values_[i + 1] -
                      values_[i + 2]) /
                     (12.0 * h);
    } else {
        const double inv = 1.0 / (h * h);
        out[0] = apply_fwd(w2_at0, inv);
        out[1] = apply_fwd(w2_at1, inv);
        out[n - 1] = apply_bwd(w2_at0, inv);
        out[n - 2] = apply_bwd(w2_at1, inv);
        for (Eigen::Index i = 2; i + 2 < n; ++i)
            out[i] = (-values_[i - 2] + 16.0 * values_[i - 1] - 30.0 * values_[i] +
                      16.0 * values_[i + 1] - values_[i + 2]) /
                     (12.0 * h * h);
    }
    return GridFunction(lo_, hi_, std::move(out));
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    Eigen::ArrayXd v(values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) v[i] = fn(values_[i]);
    return GridFunction(lo_, hi_, std::move(v));
}

GridFunction GridFunction::restricted(double a, double b, Eigen::Index n) const {
    if (a < lo_ - 1e-12 || b > hi_ + 1e-12 || !(b > a))
        throw DomainError("restricted: [a, b] not inside the grid interval");
    return sample(a, b, n, [this](double s) { return (*this)(s); });
}

bool GridFunction::same_shape(const GridFunction& other) const {
    return size() == other.size() && lo_ == other.lo_ && hi_ == other.hi_;
}

double integrate(const GridFunction& g) {
    const Eigen::Index n = g.size();
    const double h = g.spacing();
    const auto& v = g.values();
    const Eigen::Index intervals = n - 1;
    long double acc = 0.0L;

    Eigen::Index simpson_end = intervals;  // node index closing the Simpson part
    if (intervals % 2 != 0) {
        if (intervals < 3) {  // single interval: trapezoid
            return static_cast<double>(0.5L * h * (static_cast<long double>(v[0]) + v[1]));
        }
        simpson_end = intervals - 3;
    }
    for (Eigen::Index i = 0; i + 2 <= simpson_end; i += 2)
        acc += static_cast<long double>(v[i]) + 4.0L * v[i + 1] + v[i + 2];
    acc *= h / 3.0L;
    if (simpson_end != intervals) {
        // three-eighths rule on the last three intervals
        const Eigen::Index i = simpson_end;
        acc += 3.0L * h / 8.0L *
               (static_cast<long double>(v[i]) + 3.0L * v[i + 1] + 3.0L * v[i + 2] + v[i + 3]);
    }
    return static_cast<double>(acc);
}

double integrate_trapezoid(const GridFunction& g) {
    const auto& v = g.values();
    long double acc = 0.5L * (static_cast<long double>(v[0]) + v[v.size() - 1]);
    for (Eigen::Index i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return static_cast<double>(acc * g.spacing());
}

double integrate(const std::function<double(double)>& f, double a, double b, Eigen::Index n) {
    if (n < 5) n = 5;
    if (n % 2 == 0) ++n;  // odd node count -> even interval count
    const double h = (b - a) / static_cast<double>(n - 1);
    long double acc = f(a) + f(b);
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        acc += (i % 2 == 1 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(i));
    return static_cast<double>(acc * h / 3.0L);
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

Eigen::ArrayXd fd_weights(double z, std::span<const double> nodes, int order) {
    // Fornberg 1988, "Generation of finite difference formulas on arbitrarily
    // spaced grids"; returns the row for the requested derivative order.
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || n <= order) throw DomainError("fd_weights: need more nodes than order");
    Eigen::ArrayXXd c = Eigen::ArrayXXd::Zero(order + 1, n);
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(k, j) = ((nodes[i] - z) * c(k, j) - k * c(k - 1, j)) / c3;
            c(0, j) = (nodes[i] - z) * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c.row(order);
}

double bisect_sign_change(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    double fa = f(a);
    double lo = a, hi = b;
    // keep the strict-sign side at lo; the crossing is in (lo, hi]
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fa > 0.0 ? fm > 0.0 : fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace wsl
