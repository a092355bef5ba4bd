#ifndef FANBEAM_TOOLS_COMMANDS_HPP
#define FANBEAM_TOOLS_COMMANDS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fanbeam::cli {

struct SimulatePhantomArgs {
    std::string spec_path; ///< optional JSON spec; kind defaults apply if empty
    std::string kind = "log";
    int n = 256;
    double fov = 500.0;
    std::string out;
};
int cmd_simulate_phantom(const SimulatePhantomArgs& args);

struct ProjectArgs {
    std::string image_path;
    std::string geometry_path;
    std::string out;
    double noise = 0.0;
    std::uint64_t seed = 0;
};
int cmd_project(const ProjectArgs& args);

struct SimulateArgs {
    std::string phantom_spec; ///< optional JSON spec path
    std::string kind = "log";
    std::string geometry_path; ///< optional; defaults to the synthetic scan setup
    int fine_n = 1013;
    int coarse_n = 256;
    double fov = 500.0;
    int angles = 360;
    double noise = 0.02;
    std::uint64_t seed = 0;
    std::string outdir;
};
int cmd_simulate(const SimulateArgs& args);

struct PerturbDemoArgs {
    std::string sino_path;
    std::string geometry_path; ///< optional; defaults to the sinogram's geometry
    int n = 256;
    double fov = 500.0;
    double epsilon = 25.0; ///< r_D perturbation [mm]
    std::string filter = "hann";
    double cutoff = 1.0;
    std::string outdir;
};
int cmd_perturb_demo(const PerturbDemoArgs& args);

struct CalibrateArgs {
    std::string sino_path;
    std::string ref_path;
    std::string bounds_path; ///< optional JSON [[lo, hi] x 5]
    int pop = 60;
    double mu = 0.7;
    double pc = 0.7;
    int gens = 300;
    double conv_tol = 0.01;
    std::uint64_t seed = 0;
    std::string objective = "fbp"; ///< fbp | sino
    std::string filter = "hann";
    double cutoff = 1.0;
    std::string out_geometry;
    std::string out_report;
};
int cmd_calibrate(const CalibrateArgs& args);

struct ReconstructArgs {
    std::string sino_path;
    std::string geometry_path; ///< optional; defaults to the sinogram's geometry
    std::string method = "fbp"; ///< fbp | tikhonov | map
    int n = 256;
    double fov = 500.0;
    std::string filter = "hann";
    double cutoff = 1.0;
    double alpha = 10.0;
    double beta = 0.01;
    int max_iter = 0; ///< 0 = method default
    double tol = 1e-6;
    std::string init = "fbp"; ///< zeros | fbp
    int memory = 10;
    std::string out;
};
int cmd_reconstruct(const ReconstructArgs& args);

struct MetricsArgs {
    std::string a_path;
    std::string b_path;
    std::string out; ///< optional JSON output path
};
int cmd_metrics(const MetricsArgs& args);

struct ExportPgmArgs {
    std::string image_path;
    std::string out;
};
int cmd_export_pgm(const ExportPgmArgs& args);

} // namespace fanbeam::cli

#endif
