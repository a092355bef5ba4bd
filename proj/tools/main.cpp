#include <cstdlib>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fanbeam/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fan-beam CT geometry calibration and reconstruction toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (default: FANBEAM_THREADS or all cores)");

    using namespace fanbeam::cli;

    SimulatePhantomArgs sp;
    auto* c_sp = app.add_subcommand("simulate-phantom", "generate a phantom raster");
    c_sp->add_option("--spec", sp.spec_path, "phantom spec JSON");
    c_sp->add_option("--kind", sp.kind, "log | l | hole")->default_val("log");
    c_sp->add_option("--n", sp.n)->default_val(256);
    c_sp->add_option("--fov", sp.fov, "field of view [mm]")->default_val(500.0);
    c_sp->add_option("--out", sp.out)->required();

    ProjectArgs pj;
    auto* c_pj = app.add_subcommand("project", "forward-project an image raster");
    c_pj->add_option("--image", pj.image_path)->required();
    c_pj->add_option("--geometry", pj.geometry_path)->required();
    c_pj->add_option("--noise", pj.noise, "relative noise level")->default_val(0.0);
    c_pj->add_option("--seed", pj.seed)->default_val(0);
    c_pj->add_option("--out", pj.out)->required();

    SimulateArgs sm;
    auto* c_sm = app.add_subcommand(
        "simulate", "fine-grid phantom -> sinogram (+noise) -> coarse ground truth");
    c_sm->add_option("--spec", sm.phantom_spec, "phantom spec JSON");
    c_sm->add_option("--kind", sm.kind, "log | l | hole")->default_val("log");
    c_sm->add_option("--geometry", sm.geometry_path,
                     "geometry JSON (default: synthetic scan setup)");
    c_sm->add_option("--fine-n", sm.fine_n)->default_val(1013);
    c_sm->add_option("--coarse-n", sm.coarse_n)->default_val(256);
    c_sm->add_option("--fov", sm.fov)->default_val(500.0);
    c_sm->add_option("--angles", sm.angles)->default_val(360);
    c_sm->add_option("--noise", sm.noise)->default_val(0.02);
    c_sm->add_option("--seed", sm.seed)->default_val(0);
    c_sm->add_option("--outdir", sm.outdir)->required();

    PerturbDemoArgs pd;
    auto* c_pd = app.add_subcommand(
        "perturb-demo", "FBP artefact gallery for misspecified geometry");
    c_pd->add_option("--sino", pd.sino_path)->required();
    c_pd->add_option("--geometry", pd.geometry_path, "true geometry (default: embedded)");
    c_pd->add_option("--n", pd.n)->default_val(256);
    c_pd->add_option("--fov", pd.fov)->default_val(500.0);
    c_pd->add_option("--epsilon", pd.epsilon, "r_D perturbation [mm]")->default_val(25.0);
    c_pd->add_option("--filter", pd.filter)->default_val("hann");
    c_pd->add_option("--cutoff", pd.cutoff)->default_val(1.0);
    c_pd->add_option("--outdir", pd.outdir)->required();

    CalibrateArgs cb;
    auto* c_cb = app.add_subcommand("calibrate", "estimate geometry parameters");
    c_cb->add_option("--sino", cb.sino_path)->required();
    c_cb->add_option("--ref", cb.ref_path, "calibration phantom raster")->required();
    c_cb->add_option("--bounds", cb.bounds_path, "JSON [[lo, hi] x 5]");
    c_cb->add_option("--pop", cb.pop)->default_val(60);
    c_cb->add_option("--mu", cb.mu)->default_val(0.7);
    c_cb->add_option("--pc", cb.pc)->default_val(0.7);
    c_cb->add_option("--gens", cb.gens)->default_val(300);
    c_cb->add_option("--conv-tol", cb.conv_tol)->default_val(0.01);
    c_cb->add_option("--seed", cb.seed)->default_val(0);
    c_cb->add_option("--objective", cb.objective, "fbp | sino")->default_val("fbp");
    c_cb->add_option("--filter", cb.filter)->default_val("hann");
    c_cb->add_option("--cutoff", cb.cutoff)->default_val(1.0);
    c_cb->add_option("--out-geometry", cb.out_geometry)->required();
    c_cb->add_option("--out-report", cb.out_report)->required();

    ReconstructArgs rc;
    auto* c_rc = app.add_subcommand("reconstruct", "reconstruct a sinogram");
    c_rc->add_option("--sino", rc.sino_path)->required();
    c_rc->add_option("--geometry", rc.geometry_path, "geometry JSON (default: embedded)");
    c_rc->add_option("--method", rc.method, "fbp | tikhonov | map")->default_val("fbp");
    c_rc->add_option("--n", rc.n)->default_val(256);
    c_rc->add_option("--fov", rc.fov)->default_val(500.0);
    c_rc->add_option("--filter", rc.filter)->default_val("hann");
    c_rc->add_option("--cutoff", rc.cutoff)->default_val(1.0);
    c_rc->add_option("--alpha", rc.alpha, "Tikhonov weight")->default_val(10.0);
    c_rc->add_option("--beta", rc.beta, "Cauchy prior scale")->default_val(0.01);
    c_rc->add_option("--max-iter", rc.max_iter)->default_val(0);
    c_rc->add_option("--tol", rc.tol)->default_val(1e-6);
    c_rc->add_option("--init", rc.init, "zeros | fbp")->default_val("fbp");
    c_rc->add_option("--memory", rc.memory)->default_val(10);
    c_rc->add_option("--out", rc.out)->required();

    MetricsArgs mt;
    auto* c_mt = app.add_subcommand("metrics", "relative error and SSIM of two images");
    c_mt->add_option("--a", mt.a_path, "estimate raster")->required();
    c_mt->add_option("--b", mt.b_path, "reference raster")->required();
    c_mt->add_option("--out", mt.out, "optional JSON output");

    ExportPgmArgs ep;
    auto* c_ep = app.add_subcommand("export-pgm", "render a raster as 16-bit PGM");
    c_ep->add_option("--image", ep.image_path)->required();
    c_ep->add_option("--out", ep.out)->required();

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) fanbeam::set_thread_count(threads);

    try {
        if (c_sp->parsed()) return cmd_simulate_phantom(sp);
        if (c_pj->parsed()) return cmd_project(pj);
        if (c_sm->parsed()) return cmd_simulate(sm);
        if (c_pd->parsed()) return cmd_perturb_demo(pd);
        if (c_cb->parsed()) return cmd_calibrate(cb);
        if (c_rc->parsed()) return cmd_reconstruct(rc);
        if (c_mt->parsed()) return cmd_metrics(mt);
        if (c_ep->parsed()) return cmd_export_pgm(ep);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
