#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "wsl/parallel.hpp"
#include "wsl/report_io.hpp"

namespace fs = std::filesystem;
using wsl::Json;

namespace {

int g_threads = 0;

struct VerdictFailure {};  // raised to return exit code 2

std::array<double, 3> parse_point(const std::string& text) {
    std::array<double, 3> out{};
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &out[0], &out[1], &out[2]) != 3)
        throw wsl::ParseError("point must be s,azimuth_deg,elevation_deg");
    return out;
}

void cmd_analyze(const std::string& spec_path, Eigen::Index grid, double d_cap, double a_floor,
                 const std::string& out_dir) {
    wsl::WarpingFunction wf = wsl::load_manifold_spec(spec_path);
    wsl::RotSymManifold m(std::move(wf), grid);
    if (d_cap <= 0.0) d_cap = m.diameter();
    const wsl::HypothesisVerdict v = m.validate_hypotheses(d_cap, a_floor);

    const Json config{{"command", "analyze"},
                      {"spec", spec_path},
                      {"grid", grid},
                      {"D_cap", d_cap},
                      {"A_floor", a_floor}};
    Json report{{"tool", wsl::tool_block(config)}};
    report.update(wsl::verdict_to_json(m, v));

    wsl::write_atomic(fs::path(out_dir) / "grid.csv", wsl::grid_csv(m));
    wsl::write_atomic(fs::path(out_dir) / "verdict.json", report.dump(2) + "\n");
    std::cout << (v.pass() ? "pass" : "fail") << " sym_min_area="
              << wsl::format_g17(m.sym_min_area()) << " volume="
              << wsl::format_g17(m.volume()) << "\n";
    if (!v.pass()) throw VerdictFailure{};
}

void cmd_dist(const std::string& spec_path, const std::string& p_text,
              const std::string& q_text, Eigen::Index mesh) {
    wsl::WarpingFunction wf = wsl::load_manifold_spec(spec_path);
    wsl::RotSymManifold m(std::move(wf));
    const auto p = parse_point(p_text);
    const auto q = parse_point(q_text);
    wsl::DistanceQuery query{wsl::SurfacePoint::from_degrees(p[0], p[1], p[2]),
                             wsl::SurfacePoint::from_degrees(q[0], q[1], q[2]), mesh};
    std::cout << wsl::format_g17(wsl::geodesic_distance(m, query)) << "\n";
}

void cmd_sequence(const std::string& spec_path, int k, const std::string& out_dir) {
    const wsl::SequenceSpec seq = wsl::load_sequence_spec(spec_path);
    const wsl::LimitExtraction lim = wsl::extract_limit(seq);

    const Json config{{"command", "sequence"}, {"spec", spec_path}, {"k", k}};
    Json report{{"tool", wsl::tool_block(config)},
                {"family", seq.family_name},
                {"indices", seq.indices},
                {"D", seq.D}};
    Json tail = Json::array();
    for (double d : lim.tail_distances) tail.push_back(d);
    report["tail_distances"] = tail;

    const char* verdict = lim.verdict == wsl::LimitVerdict::converged      ? "converged"
                          : lim.verdict == wsl::LimitVerdict::zero_current ? "zero_current"
                                                                           : "non_convergent";
    report["verdict"] = verdict;

    if (lim.verdict == wsl::LimitVerdict::converged) {
        const wsl::LimitProfile& prof = *lim.profile;
        report["limit"] = Json{{"a_inf", prof.a_inf},
                               {"b_inf", prof.b_inf},
                               {"lipschitz_constant", prof.lipschitz_constant}};
        const wsl::WindowResult wr = wsl::ik_window(prof, k);
        report["window_status"] =
            wr.status == wsl::WindowStatus::ok ? "ok" : "disconnected";
        if (wr.status == wsl::WindowStatus::ok) {
            const wsl::H1Report h1 = wsl::h1_convergence(seq, wr.window);
            report["h1"] = wsl::h1_report_to_json(h1);
            wsl::write_atomic(fs::path(out_dir) / "norms.csv", wsl::h1_report_csv(h1));

            const auto battery =
                wsl::default_bump_battery(wr.window.a_k, wr.window.b_k);
            report["distributional"] =
                wsl::distributional_to_json(wsl::distributional_scalar_test(prof.f_inf, battery));
            report["tangent_cones"] = wsl::portrait_to_json(wsl::tangent_cone_portrait(prof, 101));

            const double span = prof.b_inf - prof.a_inf;
            const std::vector<double> radii{0.1 * span, 0.05 * span, 0.025 * span,
                                            0.0125 * span};
            for (auto pole : {wsl::Pole::left, wsl::Pole::right}) {
                Json arr = Json::array();
                for (auto [r, ratio] : wsl::pole_volume_ratio(prof, pole, radii))
                    arr.push_back(Json{{"r", r}, {"ratio", ratio}});
                report[pole == wsl::Pole::left ? "pole_ratio_left" : "pole_ratio_right"] = arr;
            }
        }
    }
    wsl::write_atomic(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
    std::cout << verdict << "\n";
    if (lim.verdict != wsl::LimitVerdict::converged) throw VerdictFailure{};
}

void cmd_swif(const std::string& spec1, const std::string& spec2, const std::string& ks_text,
              double d_cap, const std::string& lambda_mode, const std::string& out_dir) {
    wsl::RotSymManifold m1(wsl::load_manifold_spec(spec1));
    wsl::RotSymManifold m2(wsl::load_manifold_spec(spec2));

    std::vector<int> ks;
    {
        std::stringstream ss(ks_text);
        std::string item;
        while (std::getline(ss, item, ',')) ks.push_back(std::stoi(item));
        if (ks.empty()) throw wsl::ParseError("swif-bound: empty k schedule");
    }
    wsl::SwifOptions opts;
    if (lambda_mode == "sampled")
        opts.lambda_mode = wsl::SwifOptions::LambdaMode::sampled;
    else if (lambda_mode != "certified")
        throw wsl::ParseError("--lambda must be certified or sampled");

    std::vector<wsl::SwifBoundReport> reports(ks.size());
    std::vector<std::string> errors(ks.size());
    wsl::parallel_for(static_cast<int>(ks.size()), wsl::resolve_threads(g_threads), [&](int i) {
        try {
            // windows come from the second (reference) manifold's profile
            const wsl::WindowResult wr = wsl::superlevel_window(m2.grid(), ks[i]);
            if (wr.status != wsl::WindowStatus::ok)
                throw wsl::PreconditionError("superlevel set is disconnected at this k");
            reports[i] = wsl::swif_upper_bound(m1, m2, wr.window, d_cap, opts);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw wsl::Error(e);

    const Json config{{"command", "swif-bound"}, {"spec1", spec1},   {"spec2", spec2},
                      {"k", ks_text},            {"D_cap", d_cap},   {"lambda", lambda_mode}};
    Json out{{"tool", wsl::tool_block(config)}, {"D_cap", d_cap}};
    Json arr = Json::array();
    for (const auto& rep : reports) arr.push_back(wsl::swif_report_to_json(rep));
    out["reports"] = arr;
    wsl::write_atomic(fs::path(out_dir) / "swif.json", out.dump(2) + "\n");
    for (const auto& rep : reports)
        std::cout << "k=" << rep.k << " bound=" << wsl::format_g17(rep.bound) << "\n";
}

void cmd_generate(const std::string& family, const Json& params, const std::string& out_file) {
    Json spec{{"family", family}, {"params", params}};
    if (family == "custom") {
        spec = params;
        spec["family"] = "custom";
    }
    wsl::WarpingFunction wf = wsl::manifold_from_spec(spec);
    wsl::write_atomic(out_file, wsl::spec_for_generated(wf).dump(2) + "\n");
    std::cout << "wrote " << out_file << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for rotationally symmetric warped-product spheres"};
    app.require_subcommand(1);
    app.add_option("--threads", g_threads, "worker threads (WSL_THREADS overrides)");

    std::string spec_path, spec2_path, out_dir = ".", out_file;
    std::string p_text, q_text, ks_text, lambda_mode = "certified";
    Eigen::Index grid = wsl::kDefaultGrid, mesh = 512;
    double d_cap = 0.0, a_floor = 1e-12;

    auto* analyze = app.add_subcommand("analyze", "profile geometry + hypothesis verdict");
    analyze->add_option("spec", spec_path)->required();
    analyze->add_option("--grid", grid);
    analyze->add_option("--D-cap", d_cap);
    analyze->add_option("--A-floor", a_floor);
    analyze->add_option("-o,--out", out_dir);

    auto* dist = app.add_subcommand("dist", "geodesic distance between two points");
    dist->add_option("spec", spec_path)->required();
    dist->add_option("--p", p_text)->required();
    dist->add_option("--q", q_text)->required();
    dist->add_option("--mesh", mesh);

    int k_window = 4;
    auto* sequence = app.add_subcommand("sequence", "whole-sequence convergence diagnostics");
    sequence->add_option("spec", spec_path)->required();
    sequence->add_option("--k", k_window);
    sequence->add_option("-o,--out", out_dir);

    auto* swif = app.add_subcommand("swif-bound", "flat-distance upper bound pipeline");
    swif->add_option("spec1", spec_path)->required();
    swif->add_option("spec2", spec2_path)->required();
    swif->add_option("--k", ks_text)->required();
    swif->add_option("--D-cap", d_cap)->required();
    swif->add_option("--lambda", lambda_mode);
    swif->add_option("-o,--out", out_dir);

    std::string family;
    std::vector<std::string> kv_params;
    auto* generate = app.add_subcommand("generate", "emit a manifold spec file for a family");
    generate->add_option("family", family)->required();
    generate->add_option("params", kv_params, "key=value generator parameters");
    generate->add_option("-o,--out", out_file)->required();

    double rate_D = 0.0, rate_D0 = 0.0;
    int rate_k = 2, rate_i = 0;
    auto* rate = app.add_subcommand("certify-rate", "closed-form convergence-rate value");
    rate->add_option("--D", rate_D)->required();
    rate->add_option("--D0", rate_D0)->required();
    rate->add_option("--k", rate_k)->required();
    rate->add_option("--i", rate_i)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) cmd_analyze(spec_path, grid, d_cap, a_floor, out_dir);
        if (*dist) cmd_dist(spec_path, p_text, q_text, mesh);
        if (*sequence) cmd_sequence(spec_path, k_window, out_dir);
        if (*swif) cmd_swif(spec_path, spec2_path, ks_text, d_cap, lambda_mode, out_dir);
        if (*generate) {
            Json params = Json::object();
            for (const auto& kv : kv_params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw wsl::ParseError("generator parameters must be key=value");
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                try {
                    params[key] = std::stod(val);
                } catch (const std::exception&) {
                    params[key] = val;
                }
            }
            cmd_generate(family, params, out_file);
        }
        if (*rate) std::cout << wsl::format_g17(wsl::rate_certificate(rate_D, rate_D0, rate_k,
                                                                      rate_i))
                             << "\n";
    } catch (const VerdictFailure&) {
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
