#include "wsl/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "wsl/expression.hpp"

namespace wsl {

namespace fs = std::filesystem;

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string config_hash(const Json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json tool_block(const Json& config) {
    return Json{{"name", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash(config)}};
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    fs::rename(tmp, path);
}

namespace {

double require_number(const Json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError("spec: missing numeric field '" + key + "'");
    return j[key].get<double>();
}

Eigen::Index grid_of(const Json& spec, Eigen::Index fallback) {
    if (spec.contains("grid")) return spec["grid"].get<Eigen::Index>();
    return fallback;
}

}  // namespace

WarpingFunction manifold_from_spec(const Json& spec) {
    if (spec.contains("samples")) {
        const double L = require_number(spec, "domain_end");
        CustomSpec cs;
        cs.samples = spec["samples"].get<std::vector<double>>();
        cs.domain_end = L;
        cs.strict = spec.value("strict", true);
        cs.smooth_radius = spec.value("smooth_radius", 0.0);
        return custom_profile(cs);
    }
    if (!spec.contains("family") || !spec["family"].is_string())
        throw ParseError("spec: expected 'family' or 'samples'");
    const std::string family = spec["family"].get<std::string>();
    const Json params = spec.value("params", Json::object());

    if (family == "round_sphere")
        return round_sphere(require_number(params, "radius"), grid_of(spec, kDefaultGrid));
    if (family == "collapsing")
        return collapsing_family(static_cast<int>(require_number(params, "j")),
                                 grid_of(spec, kDefaultGrid));
    if (family == "scaled_sine")
        return scaled_sine(require_number(params, "c"), grid_of(spec, kDefaultGrid));
    if (family == "lakzian") {
        LakzianParams p;
        p.delta = require_number(params, "delta");
        p.L_spline = require_number(params, "L_spline");
        p.grid = grid_of(spec, 8192);
        return lakzian_family(p).warping;
    }
    if (family == "custom") {
        CustomSpec cs;
        if (spec.contains("expression")) cs.expression = spec["expression"].get<std::string>();
        cs.domain_end = require_number(spec, "domain_end");
        cs.grid = grid_of(spec, kDefaultGrid);
        cs.smooth_radius = spec.value("smooth_radius", 0.0);
        cs.strict = spec.value("strict", true);
        return custom_profile(cs);
    }
    throw ParseError("spec: unknown family '" + family + "'");
}

WarpingFunction load_manifold_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifold spec " + path.string());
    Json spec;
    try {
        spec = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    try {
        return manifold_from_spec(spec);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

namespace {

std::function<double(int)> schedule_entry(const Json& schedule, const std::string& key,
                                          const std::vector<int>& indices) {
    const Json& e = schedule.at(key);
    if (e.is_string()) {
        Expression expr = Expression::parse(e.get<std::string>());
        return [expr](int j) { return expr.eval({{"j", static_cast<double>(j)}}); };
    }
    if (e.is_array()) {
        auto values = e.get<std::vector<double>>();
        if (values.size() != indices.size())
            throw ParseError("schedule array for '" + key + "' must match the index count");
        std::map<int, double> lut;
        for (size_t i = 0; i < indices.size(); ++i) lut[indices[i]] = values[i];
        return [lut](int j) { return lut.at(j); };
    }
    throw ParseError("schedule entry '" + key + "' must be a formula string or an array");
}

}  // namespace

SequenceSpec sequence_from_spec(const Json& spec) {
    SequenceSpec out;
    if (!spec.contains("family") || !spec.contains("indices") || !spec.contains("D"))
        throw ParseError("sequence spec needs 'family', 'indices', 'D'");
    out.family_name = spec["family"].get<std::string>();
    out.indices = spec["indices"].get<std::vector<int>>();
    out.D = spec["D"].get<double>();
    out.grid = grid_of(spec, kDefaultGrid);
    const Json schedule = spec.value("schedule", Json::object());
    const Eigen::Index member_grid = out.grid;

    if (out.family_name == "collapsing") {
        out.generator = [member_grid](int j) { return collapsing_family(j, member_grid); };
    } else if (out.family_name == "round_sphere") {
        auto radius = schedule_entry(schedule, "radius", out.indices);
        out.generator = [radius, member_grid](int j) {
            return round_sphere(radius(j), member_grid);
        };
    } else if (out.family_name == "scaled_sine") {
        auto c = schedule_entry(schedule, "c", out.indices);
        out.generator = [c, member_grid](int j) { return scaled_sine(c(j), member_grid); };
    } else if (out.family_name == "expression") {
        if (!spec.contains("expression") || !spec.contains("domain_end"))
            throw ParseError("expression sequences need 'expression' and 'domain_end'");
        Expression expr = Expression::parse(spec["expression"].get<std::string>());
        const double L = spec["domain_end"].get<double>();
        const bool strict = spec.value("strict", true);
        out.generator = [expr, L, member_grid, strict](int j) {
            GridFunction g = GridFunction::sample(0.0, L, member_grid, [&](double s) {
                return expr.eval({{"s", s}, {"j", static_cast<double>(j)}});
            });
            CustomSpec cs;
            cs.samples = std::vector<double>(g.values().begin(), g.values().end());
            cs.domain_end = L;
            cs.strict = strict;
            return custom_profile(cs);
        };
    } else {
        throw ParseError("sequence spec: unknown family '" + out.family_name + "'");
    }
    return out;
}

SequenceSpec load_sequence_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sequence spec " + path.string());
    Json spec;
    try {
        spec = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    try {
        return sequence_from_spec(spec);
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Json spec_for_generated(const WarpingFunction& wf) {
    Json spec;
    // named generators round-trip as family + params so that reconstruction
    // keeps their analytic derivative closures
    static const std::set<std::string> kNamed{"round_sphere", "collapsing", "scaled_sine",
                                              "lakzian"};
    if (wf.representation() == Representation::closed_form || kNamed.count(wf.family())) {
        spec["family"] = wf.family();
        Json params = Json::object();
        for (const auto& [k, v] : wf.params()) params[k] = v;
        spec["params"] = params;
        spec["grid"] = wf.grid().size();
        return spec;
    }
    spec["samples"] = std::vector<double>(wf.grid().values().begin(), wf.grid().values().end());
    spec["domain_end"] = wf.domain_end();
    spec["provenance"] = Json{{"family", wf.family()}};
    for (const auto& [k, v] : wf.params()) spec["provenance"][k] = v;
    // sampled generators may legitimately violate the smooth-pole checks
    spec["strict"] = false;
    return spec;
}

std::string grid_csv(const RotSymManifold& m) {
    std::string out = "s,f,fp,fpp,scalar,mean_curvature\n";
    const auto& g = m.grid();
    const auto& d1 = m.warping().derivative_grid(1);
    const auto& d2 = m.warping().derivative_grid(2);
    const double guard = m.pole_guard();
    const Eigen::Index n = g.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = g.node(i);
        const double f = g.value(i);
        const double fp = d1.value(i);
        const double fpp = d2.value(i);
        double scalar = std::numeric_limits<double>::quiet_NaN();
        double mean = std::numeric_limits<double>::quiet_NaN();
        if (i > 0 && i + 1 < n && f > guard) {
            scalar = -4.0 * fpp / f + 2.0 * (1.0 - fp * fp) / (f * f);
            mean = 2.0 * fp / f;
        }
        out += format_g17(s) + ',' + format_g17(f) + ',' + format_g17(fp) + ',' +
               format_g17(fpp) + ',' + format_g17(scalar) + ',' + format_g17(mean) + '\n';
    }
    return out;
}

namespace {

const char* kind_name(CriticalSphere::Kind k) {
    switch (k) {
        case CriticalSphere::Kind::interior_min: return "interior_min";
        case CriticalSphere::Kind::interior_max: return "interior_max";
        case CriticalSphere::Kind::plateau: return "plateau";
    }
    return "?";
}

}  // namespace

Json verdict_to_json(const RotSymManifold& m, const HypothesisVerdict& v) {
    const auto& val = m.validation();
    Json spheres = Json::array();
    for (const auto& cs : m.critical_spheres())
        spheres.push_back(Json{{"s", cs.s}, {"area", cs.area}, {"kind", kind_name(cs.kind)}});
    return Json{
        {"manifold",
         Json{{"domain_end", m.diameter()},
              {"grid_resolution", m.grid_resolution()},
              {"volume", m.volume()},
              {"volume_trapezoid_2x", m.volume_trapezoid_2x()},
              {"diameter", m.diameter()},
              {"validation",
               Json{{"f_left", val.endpoints.f_left},
                    {"f_right", val.endpoints.f_right},
                    {"fp_left", val.endpoints.fp_left},
                    {"fp_right", val.endpoints.fp_right},
                    {"endpoints_zero", val.endpoints.endpoints_ok()},
                    {"positive_interior", val.positive_interior},
                    {"smooth", val.smooth}}}}},
        {"critical_spheres", spheres},
        {"monotonicity_marks",
         Json{{"A", m.monotonicity_marks().A}, {"B", m.monotonicity_marks().B}}},
        {"sym_min_area",
         Json{{"value", m.sym_min_area()},
              {"kind", kind_name(m.min_area_sphere().kind)},
              {"approximate", m.min_area_sphere().kind == CriticalSphere::Kind::plateau}}},
        {"hypotheses",
         Json{{"D_cap", v.D_cap},
              {"A_floor", v.A_floor},
              {"diameter", v.diameter},
              {"diameter_ok", v.diameter_ok},
              {"scalar_ok", v.scalar_ok},
              {"scalar_min", v.scalar_min},
              {"scalar_argmin", v.scalar_argmin},
              {"scalar_claimed", v.scalar_claimed},
              {"min_area_ok", v.min_area_ok},
              {"sym_min_area", v.sym_min_area},
              {"min_area_approximate", v.min_area_approximate},
              {"max_abs_slope", v.max_abs_slope},
              {"lipschitz_consistent", v.lipschitz_consistent},
              {"area_diameter_consistent", v.area_diameter_consistent},
              {"pass", v.pass()}}}};
}

Json h1_report_to_json(const H1Report& rep) {
    Json members = Json::array();
    for (const auto& d : rep.members)
        members.push_back(Json{{"j", d.j},
                               {"uniform_distance", d.uniform_dist},
                               {"l2_fprime_diff", d.l2_fprime_diff},
                               {"l2_hprime_diff", d.l2_hprime_diff},
                               {"bv_hprime", d.bv_hprime},
                               {"bv_bound", d.bv_bound},
                               {"bv_margin", d.bv_margin},
                               {"min_on_window", d.min_on_window},
                               {"A", d.A},
                               {"B", d.B}});
    return Json{{"window",
                 Json{{"k", rep.window.k}, {"a_k", rep.window.a_k}, {"b_k", rep.window.b_k}}},
                {"members", members}};
}

std::string h1_report_csv(const H1Report& rep) {
    std::string out =
        "j,uniform_distance,l2_fprime_diff,l2_hprime_diff,bv_hprime,bv_bound,bv_margin,A,B\n";
    for (const auto& d : rep.members) {
        out += std::to_string(d.j) + ',' + format_g17(d.uniform_dist) + ',' +
               format_g17(d.l2_fprime_diff) + ',' + format_g17(d.l2_hprime_diff) + ',' +
               format_g17(d.bv_hprime) + ',' + format_g17(d.bv_bound) + ',' +
               format_g17(d.bv_margin) + ',' + format_g17(d.A) + ',' + format_g17(d.B) + '\n';
    }
    return out;
}

Json swif_report_to_json(const SwifBoundReport& rep) {
    auto geom = [](const WindowGeometry& g) {
        return Json{{"vol_W", g.vol_W},
                    {"area_bdry", g.area_bdry},
                    {"vol_excess", g.vol_excess},
                    {"margin_vol_excess", g.margin_vol_excess},
                    {"margin_vol_W", g.margin_vol_W},
                    {"margin_area", g.margin_area}};
    };
    Json terms = Json::object();
    for (const auto& [k, v] : rep.term_breakdown) terms[k] = v;
    return Json{{"k", rep.k},
                {"window", Json{{"a_k", rep.window.a_k}, {"b_k", rep.window.b_k}}},
                {"epsilon", rep.epsilon},
                {"lambda_lower", rep.lambda_lower},
                {"lambda_upper", rep.lambda_upper},
                {"lambda_used", rep.lambda_used},
                {"lambda_certified", rep.lambda_certified},
                {"lambda_argmax",
                 Json{{"s_x", rep.lambda_argmax.s_x},
                      {"s_y", rep.lambda_argmax.s_y},
                      {"dtheta", rep.lambda_argmax.dtheta},
                      {"d_in_first", rep.lambda_argmax.d_in_first},
                      {"d_in_second", rep.lambda_argmax.d_in_second},
                      {"gap", rep.lambda_argmax.gap}}},
                {"h", rep.h},
                {"h_bar", rep.h_bar},
                {"a", rep.a},
                {"D0", rep.D0},
                {"h_inequality_ok", rep.h_inequality_ok},
                {"window_1", geom(rep.geom1)},
                {"window_2", geom(rep.geom2)},
                {"term_breakdown", terms},
                {"bound", rep.bound}};
}

Json distributional_to_json(const std::vector<DistributionalResult>& results) {
    Json arr = Json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        arr.push_back(Json{{"center", r.u.center},
                           {"radius", r.u.radius},
                           {"lhs", r.lhs},
                           {"rhs", r.rhs},
                           {"pass", r.pass}});
    }
    // scalar_floor_H is reporting-only: the tested inequality is the H = 0 one
    return Json{{"scalar_floor_H", 0.0}, {"battery", arr}, {"all_pass", all}};
}

Json portrait_to_json(const TangentConePortrait& port) {
    Json corners = Json::array();
    for (double c : port.corners) corners.push_back(c);
    return Json{{"n_points", static_cast<int>(port.probes.size())},
                {"euclidean_fraction", port.euclidean_fraction},
                {"corners", corners},
                {"unresolved", port.unresolved}};
}

}  // namespace wsl
