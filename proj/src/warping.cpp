#include "wsl/warping.hpp"

#include <cmath>

namespace wsl {

struct WarpingFunction::Impl {
    Representation rep;
    DerivativeSource source;
    std::string family;
    std::map<std::string, double> params;
    std::optional<ProfileField> field;
    GridFunction samples;
    GridFunction d1;
    GridFunction d2;
    EndpointChecks checks;

    Impl(Representation r, DerivativeSource s, std::string fam,
         std::map<std::string, double> p, std::optional<ProfileField> fld, GridFunction g,
         GridFunction g1, GridFunction g2)
        : rep(r), source(s), family(std::move(fam)), params(std::move(p)),
          field(std::move(fld)), samples(std::move(g)), d1(std::move(g1)), d2(std::move(g2)) {}
};

namespace {

EndpointChecks run_checks(const GridFunction& g, const GridFunction& d1) {
    EndpointChecks c;
    const Eigen::Index n = g.size();
    c.f_left = g.value(0);
    c.f_right = g.value(n - 1);
    c.fp_left = d1.value(0);
    c.fp_right = d1.value(n - 1);
    c.left_zero = std::abs(c.f_left) <= tol::endpoint;
    c.right_zero = std::abs(c.f_right) <= tol::endpoint;
    c.left_slope = std::abs(c.fp_left - 1.0) <= tol::endpoint_slope;
    c.right_slope = std::abs(c.fp_right + 1.0) <= tol::endpoint_slope;
    c.positive_interior = true;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        if (!(g.value(i) > 0.0)) {
            c.positive_interior = false;
            break;
        }
    return c;
}

GridFunction grid_from_field(const std::function<double(double)>& f, double L,
                             Eigen::Index n) {
    return GridFunction::sample(0.0, L, n, f);
}

}  // namespace

WarpingFunction WarpingFunction::closed_form(std::string family,
                                             std::map<std::string, double> params,
                                             ProfileField field, double domain_end,
                                             Eigen::Index grid_n) {
    if (!(domain_end > 0.0)) throw ConstructionError("domain_end must be positive");
    GridFunction g = grid_from_field(field.f, domain_end, grid_n);
    GridFunction g1 = grid_from_field(field.df, domain_end, grid_n);
    GridFunction g2 = grid_from_field(field.d2f, domain_end, grid_n);
    auto impl = std::make_shared<Impl>(Representation::closed_form, DerivativeSource::analytic,
                                       std::move(family), std::move(params), std::move(field),
                                       std::move(g), std::move(g1), std::move(g2));
    impl->checks = run_checks(impl->samples, impl->d1);
    return WarpingFunction(std::move(impl));
}

WarpingFunction WarpingFunction::sampled(GridFunction samples, std::string family,
                                         std::map<std::string, double> params) {
    if (!(samples.lo() == 0.0)) throw ConstructionError("warping samples must start at s = 0");
    GridFunction g1 = samples.derivative(1);
    GridFunction g2 = samples.derivative(2);
    auto impl = std::make_shared<Impl>(Representation::sampled,
                                       DerivativeSource::finite_difference, std::move(family),
                                       std::move(params), std::nullopt, std::move(samples),
                                       std::move(g1), std::move(g2));
    impl->checks = run_checks(impl->samples, impl->d1);
    return WarpingFunction(std::move(impl));
}

WarpingFunction WarpingFunction::sampled_with_field(GridFunction samples, ProfileField field,
                                                    std::string family,
                                                    std::map<std::string, double> params) {
    if (!(samples.lo() == 0.0)) throw ConstructionError("warping samples must start at s = 0");
    const double L = samples.hi();
    const Eigen::Index n = samples.size();
    GridFunction g1 = GridFunction::sample(0.0, L, n, field.df);
    GridFunction g2 = GridFunction::sample(0.0, L, n, field.d2f);
    auto impl = std::make_shared<Impl>(Representation::sampled, DerivativeSource::analytic,
                                       std::move(family), std::move(params), std::move(field),
                                       std::move(samples), std::move(g1), std::move(g2));
    impl->checks = run_checks(impl->samples, impl->d1);
    return WarpingFunction(std::move(impl));
}

double WarpingFunction::domain_end() const { return impl_->samples.hi(); }
Representation WarpingFunction::representation() const { return impl_->rep; }
DerivativeSource WarpingFunction::derivative_source() const { return impl_->source; }

double WarpingFunction::eval(double s) const {
    const double L = domain_end();
    if (s < -1e-12 * L || s > L * (1.0 + 1e-12))
        throw DomainError("warping function evaluated outside [0, L]");
    s = std::clamp(s, 0.0, L);
    if (impl_->field) return impl_->field->f(s);
    return impl_->samples(s);
}

double WarpingFunction::derivative(double s, int order) const {
    if (order != 1 && order != 2) throw DomainError("derivative order must be 1 or 2");
    const double L = domain_end();
    if (s < -1e-12 * L || s > L * (1.0 + 1e-12))
        throw DomainError("derivative requested outside [0, L]");
    s = std::clamp(s, 0.0, L);
    if (impl_->field) return order == 1 ? impl_->field->df(s) : impl_->field->d2f(s);
    if (order == 2 && (s == 0.0 || s == L))
        throw UnsupportedPointError(
            "second derivative of sampled data is not supported at the poles");
    return order == 1 ? impl_->d1(s) : impl_->d2(s);
}

const GridFunction& WarpingFunction::grid() const { return impl_->samples; }

const GridFunction& WarpingFunction::derivative_grid(int order) const {
    if (order == 1) return impl_->d1;
    if (order == 2) return impl_->d2;
    throw DomainError("derivative order must be 1 or 2");
}

const EndpointChecks& WarpingFunction::endpoint_checks() const { return impl_->checks; }
const std::string& WarpingFunction::family() const { return impl_->family; }
const std::map<std::string, double>& WarpingFunction::params() const { return impl_->params; }

bool WarpingFunction::same_profile(const WarpingFunction& other) const {
    if (impl_ == other.impl_) return true;
    if (domain_end() != other.domain_end()) return false;
    const auto& a = impl_->samples.values();
    const auto& b = other.impl_->samples.values();
    return a.size() == b.size() && (a == b).all();
}

}  // namespace wsl
