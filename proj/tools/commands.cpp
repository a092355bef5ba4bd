#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "fanbeam/calib.hpp"
#include "fanbeam/fbp.hpp"
#include "fanbeam/io.hpp"
#include "fanbeam/metrics.hpp"
#include "fanbeam/phantoms.hpp"
#include "fanbeam/projector.hpp"
#include "fanbeam/recon.hpp"

namespace fanbeam::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    json j;
    f >> j;
    return j;
}

void save_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing " + path);
    f << j.dump(2) << "\n";
}

Vec2 vec2_from(const json& j, Vec2 fallback) {
    if (j.is_null()) return fallback;
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ImageGrid phantom_from_spec(const std::string& spec_path, const std::string& kind,
                            int n, double fov, json* used_spec) {
    json j = json::object();
    std::string k = kind;
    if (!spec_path.empty()) {
        j = load_json(spec_path);
        k = j.value("kind", kind);
    }
    ImageGrid img;
    if (k == "log") {
        LogPhantomSpec s;
        s.radius_fraction = j.value("radius_fraction", s.radius_fraction);
        s.rings = j.value("rings", s.rings);
        s.ring_low = j.value("ring_low", s.ring_low);
        s.ring_high = j.value("ring_high", s.ring_high);
        s.knot_value = j.value("knot_value", s.knot_value);
        s.foreign_value = j.value("foreign_value", s.foreign_value);
        img = make_log_phantom(n, fov, s);
        if (used_spec)
            *used_spec = json{{"kind", "log"},
                              {"radius_fraction", s.radius_fraction},
                              {"rings", s.rings},
                              {"ring_low", s.ring_low},
                              {"ring_high", s.ring_high},
                              {"knot_value", s.knot_value},
                              {"foreign_value", s.foreign_value}};
    } else if (k == "l") {
        LPhantomSpec s;
        s.arm_length = j.value("arm_length", s.arm_length);
        s.arm_width = j.value("arm_width", s.arm_width);
        s.attenuation = j.value("attenuation", s.attenuation);
        s.center_offset = vec2_from(j.value("center_offset", json()), s.center_offset);
        img = make_l_phantom(n, fov, s);
        if (used_spec)
            *used_spec = json{{"kind", "l"},
                              {"arm_length", s.arm_length},
                              {"arm_width", s.arm_width},
                              {"attenuation", s.attenuation},
                              {"center_offset", {s.center_offset.x, s.center_offset.y}}};
    } else if (k == "hole") {
        HolePhantomSpec s;
        s.outer_side = j.value("outer_side", s.outer_side);
        s.hole_radius = j.value("hole_radius", s.hole_radius);
        s.hole_offset = vec2_from(j.value("hole_offset", json()), s.hole_offset);
        s.attenuation = j.value("attenuation", s.attenuation);
        img = make_hole_phantom(n, fov, s);
        if (used_spec)
            *used_spec = json{{"kind", "hole"},
                              {"outer_side", s.outer_side},
                              {"hole_radius", s.hole_radius},
                              {"hole_offset", {s.hole_offset.x, s.hole_offset.y}},
                              {"attenuation", s.attenuation}};
    } else {
        throw std::runtime_error("unknown phantom kind: " + k);
    }
    return img;
}

// Synthetic scan setup used throughout the experiments.
std::pair<ScannerConfig, GeometryParams> default_scan(int angles) {
    ScannerConfig cfg;
    cfg.n_angles = angles;
    GeometryParams g;
    g.first_angle = 2.55;
    g.det_radius = 715.0;
    g.source_shift = 320.0;
    g.det_shift = 44.0;
    g.det_tilt = 0.28;
    return {cfg, g};
}

json theta_json(const GeometryParams& g) {
    return json{{"alpha0", g.first_angle},
                {"r_D", g.det_radius},
                {"h_S", g.source_shift},
                {"h_D", g.det_shift},
                {"alpha_D", g.det_tilt}};
}

} // namespace

int cmd_simulate_phantom(const SimulatePhantomArgs& args) {
    json spec;
    ImageGrid img = phantom_from_spec(args.spec_path, args.kind, args.n, args.fov, &spec);
    write_raster(args.out, img);
    std::cout << "wrote " << args.out << ".{json,bin} (" << img.n << "x" << img.n
              << ", fov " << img.fov << " mm)\n";
    return 0;
}

int cmd_project(const ProjectArgs& args) {
    const ImageGrid img = read_image_raster(args.image_path);
    auto [cfg, g] = read_geometry_json(args.geometry_path);
    const RaySet rays = ray_set(cfg, g);
    Sinogram sino = forward_project(img, rays);
    if (args.noise > 0.0) sino = add_noise(sino, {args.noise, args.seed});
    write_raster(args.out, SinogramBundle{std::move(sino), cfg, g});
    std::cout << "wrote " << args.out << ".{json,bin} (" << cfg.n_angles << "x"
              << cfg.det_count << ")\n";
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    fs::create_directories(args.outdir);
    ScannerConfig cfg;
    GeometryParams g;
    if (!args.geometry_path.empty()) {
        std::tie(cfg, g) = read_geometry_json(args.geometry_path);
        cfg.n_angles = args.angles;
    } else {
        std::tie(cfg, g) = default_scan(args.angles);
    }

    json spec;
    const ImageGrid fine =
        phantom_from_spec(args.phantom_spec, args.kind, args.fine_n, args.fov, &spec);
    const ImageGrid coarse = resample_image(fine, args.coarse_n);

    const RaySet rays = ray_set(cfg, g);
    Sinogram sino = forward_project(fine, rays);
    if (args.noise > 0.0) sino = add_noise(sino, {args.noise, args.seed});

    const std::string sino_path = (fs::path(args.outdir) / "sinogram").string();
    const std::string fine_path = (fs::path(args.outdir) / "ground_truth_fine").string();
    const std::string coarse_path = (fs::path(args.outdir) / "ground_truth").string();
    write_raster(sino_path, SinogramBundle{sino, cfg, g});
    write_raster(fine_path, fine);
    write_raster(coarse_path, coarse);

    save_json((fs::path(args.outdir) / "provenance.json").string(),
              json{{"command", "simulate"},
                   {"phantom", spec},
                   {"theta", theta_json(g)},
                   {"r_S", cfg.source_radius},
                   {"n_D", cfg.det_count},
                   {"det_pixel_mm", cfg.det_pixel},
                   {"angles", args.angles},
                   {"fine_n", args.fine_n},
                   {"coarse_n", args.coarse_n},
                   {"fov_mm", args.fov},
                   {"noise", args.noise},
                   {"seed", args.seed},
                   {"outputs", {sino_path, fine_path, coarse_path}}});
    std::cout << "wrote " << sino_path << ", " << fine_path << ", " << coarse_path
              << "\n";
    return 0;
}

int cmd_perturb_demo(const PerturbDemoArgs& args) {
    fs::create_directories(args.outdir);
    SinogramBundle bundle = read_sinogram_raster(args.sino_path);
    ScannerConfig cfg = bundle.cfg;
    GeometryParams g = bundle.geom;
    if (!args.geometry_path.empty()) std::tie(cfg, g) = read_geometry_json(args.geometry_path);

    FilterSpec filter{filter_from_name(args.filter), args.cutoff};

    // the misspecification cases of the artefact gallery
    struct Case {
        const char* label;
        GeometryParams theta;
    };
    GeometryParams a = g, b = g, c = g, d = g, e = g;
    a.source_shift = a.det_shift = 0.0; a.det_tilt = 0.0;
    b.det_shift = 0.0; b.det_tilt = 0.0;
    c.det_tilt = 0.0;
    d.source_shift = d.det_shift = 0.0;
    e.det_radius += args.epsilon;
    const std::vector<Case> cases = {{"a", a}, {"b", b}, {"c", c},
                                     {"d", d}, {"e", e}, {"f", g}};

    ImageGrid reference;
    json table = json::array();
    std::vector<ImageGrid> recons;
    recons.reserve(cases.size());
    for (const Case& cs : cases)
        recons.push_back(fbp_reconstruct(bundle.sino, cfg, cs.theta, args.n,
                                         args.fov, filter));
    const ImageGrid& ref = recons.back(); // case (f): all parameters correct
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string out =
            (fs::path(args.outdir) / (std::string("case_") + cases[i].label)).string();
        write_raster(out, recons[i]);
        export_pgm(recons[i], out + ".pgm");
        table.push_back(json{{"case", cases[i].label},
                             {"theta", theta_json(cases[i].theta)},
                             {"rel_error", relative_error(recons[i], ref)},
                             {"ssim", ssim(recons[i], ref)}});
    }
    save_json((fs::path(args.outdir) / "metrics.json").string(),
              json{{"command", "perturb-demo"},
                   {"reference_case", "f"},
                   {"epsilon_mm", args.epsilon},
                   {"filter", args.filter},
                   {"table", table}});
    std::cout << "wrote 6 reconstructions to " << args.outdir << "\n";
    return 0;
}

int cmd_calibrate(const CalibrateArgs& args) {
    SinogramBundle bundle = read_sinogram_raster(args.sino_path);
    ImageGrid ref = read_image_raster(args.ref_path);
    FilterSpec filter{filter_from_name(args.filter), args.cutoff};
    const double fov = ref.fov;

    CalibProblem prob =
        make_calib_problem(std::move(bundle.sino), std::move(ref), bundle.cfg, fov, filter);

    DeOptions opts;
    opts.pop_size = args.pop;
    opts.mutation = args.mu;
    opts.crossover_prob = args.pc;
    opts.max_gen = args.gens;
    opts.conv_tol = args.conv_tol;
    opts.seed = args.seed;
    opts.bounds = args.bounds_path.empty()
                      ? default_calibration_bounds()
                      : [&] {
                            std::vector<std::array<double, 2>> b;
                            for (const auto& row : load_json(args.bounds_path))
                                b.push_back({row.at(0).get<double>(),
                                             row.at(1).get<double>()});
                            return b;
                        }();

    OptimizerReport report;
    if (args.objective == "fbp") {
        report = calibrate(prob, opts);
    } else if (args.objective == "sino") {
        const DeReport de = de_minimize(
            [&](const std::vector<double>& x) {
                return objective_J_sino(theta_from_vector(x), prob);
            },
            opts);
        report.best_theta = theta_from_vector(de.best);
        report.best_value = de.best_value;
        report.trace = de.trace;
        report.generations = de.generations;
        report.seed = de.seed;
        const ImageGrid recon = fbp_reconstruct(prob.sino, prob.cfg, report.best_theta,
                                                prob.recon_n, prob.fov, prob.filter);
        const CorrelationPair cp =
            correlation_with_references(recon, prob.ref, prob.ref_mirror);
        report.mirrored = cp.with_mirror > cp.with_ref;
    } else {
        throw std::runtime_error("unknown objective: " + args.objective);
    }

    ScannerConfig out_cfg = prob.cfg;
    write_geometry_json(args.out_geometry, out_cfg, report.best_theta);
    save_json(args.out_report,
              json{{"command", "calibrate"},
                   {"objective", args.objective},
                   {"best_theta", theta_json(report.best_theta)},
                   {"best_value", report.best_value},
                   {"mirrored", report.mirrored},
                   {"generations", report.generations},
                   {"seed", report.seed},
                   {"trace", report.trace},
                   {"pop", args.pop},
                   {"mu", args.mu},
                   {"pc", args.pc},
                   {"conv_tol", args.conv_tol},
                   {"filter", args.filter},
                   {"cutoff", args.cutoff},
                   {"fov_mm", fov},
                   {"sino", args.sino_path},
                   {"ref", args.ref_path}});
    std::cout << "best J = " << report.best_value << " after " << report.generations
              << " generations (mirrored: " << (report.mirrored ? "yes" : "no")
              << ")\n";
    return 0;
}

int cmd_reconstruct(const ReconstructArgs& args) {
    SinogramBundle bundle = read_sinogram_raster(args.sino_path);
    ScannerConfig cfg = bundle.cfg;
    GeometryParams g = bundle.geom;
    if (!args.geometry_path.empty()) std::tie(cfg, g) = read_geometry_json(args.geometry_path);
    if (cfg.n_angles != bundle.sino.k)
        throw std::runtime_error("geometry n_angles does not match the sinogram");

    FilterSpec filter{filter_from_name(args.filter), args.cutoff};
    json report{{"command", "reconstruct"},
                {"method", args.method},
                {"sino", args.sino_path},
                {"n", args.n},
                {"fov_mm", args.fov},
                {"theta", theta_json(g)}};

    ImageGrid out;
    if (args.method == "fbp") {
        out = fbp_reconstruct(bundle.sino, cfg, g, args.n, args.fov, filter);
        report["filter"] = args.filter;
        report["cutoff"] = args.cutoff;
    } else if (args.method == "tikhonov") {
        TikhonovOptions opts;
        opts.alpha = args.alpha;
        opts.max_iter = args.max_iter > 0 ? args.max_iter : 200;
        opts.tol = args.tol;
        const RaySet rays = ray_set(cfg, g);
        TikhonovResult res =
            tikhonov_reconstruct(bundle.sino, rays, args.n, args.fov, opts);
        out = std::move(res.image);
        report["alpha"] = opts.alpha;
        report["converged"] = res.converged;
        report["iterations"] = res.iterations;
        report["residual"] = res.residual;
    } else if (args.method == "map") {
        CauchyMapOptions opts;
        opts.beta = args.beta;
        opts.max_iter = args.max_iter > 0 ? args.max_iter : 400;
        opts.memory = args.memory;
        if (args.init == "zeros") opts.init = MapInit::Zeros;
        else if (args.init == "fbp") opts.init = MapInit::Fbp;
        else throw std::runtime_error("unknown init: " + args.init);
        MapResult res =
            map_reconstruct(bundle.sino, cfg, g, args.n, args.fov, opts, filter);
        out = std::move(res.image);
        report["beta"] = opts.beta;
        report["init"] = args.init;
        report["converged"] = res.converged;
        report["iterations"] = res.iterations;
        report["grad_norm"] = res.grad_norm;
        report["objective"] = res.objective;
    } else {
        throw std::runtime_error("unknown method: " + args.method);
    }

    write_raster(args.out, out);
    save_json(args.out + ".report.json", report);
    std::cout << "wrote " << args.out << ".{json,bin}\n";
    return 0;
}

int cmd_metrics(const MetricsArgs& args) {
    const ImageGrid a = read_image_raster(args.a_path);
    const ImageGrid b = read_image_raster(args.b_path);
    const json j{{"rel_error", relative_error(a, b)}, {"ssim", ssim(a, b)}};
    std::cout << j.dump(2) << "\n";
    if (!args.out.empty()) save_json(args.out, j);
    return 0;
}

int cmd_export_pgm(const ExportPgmArgs& args) {
    const ImageGrid img = read_image_raster(args.image_path);
    export_pgm(img, args.out);
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

} // namespace fanbeam::cli
