#ifndef FANBEAM_CALIB_HPP
#define FANBEAM_CALIB_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fanbeam/fbp.hpp"
#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"
#include "fanbeam/projector.hpp"

namespace fanbeam {

/// Measured calibration-phantom data plus the known reference image and the
/// reconstruction settings the objective evaluates with. The mirrored
/// reference and the support cache are derived by make_calib_problem.
struct CalibProblem {
    Sinogram sino;
    ImageGrid ref;
    ImageGrid ref_mirror;
    ScannerConfig cfg;
    int recon_n = 0;
    double fov = 0.0;
    FilterSpec filter;

    /// Pixels where ref or ref_mirror is nonzero; the correlation objective
    /// only backprojects there.
    struct SupportPixel {
        double x, y;
        double ref_val, mirror_val;
    };
    std::vector<SupportPixel> support;
};

CalibProblem make_calib_problem(Sinogram sino, ImageGrid ref, ScannerConfig cfg,
                                double fov, FilterSpec filter = {});

/// Differential-evolution control parameters (DE/best/1/bin).
struct DeOptions {
    int pop_size = 60;
    double mutation = 0.7;        ///< mu in [0, 2]
    double crossover_prob = 0.7;  ///< P_cross in [0, 1]
    int max_gen = 300;
    double conv_tol = 0.01; ///< stop when std(fitness) <= conv_tol * |mean fitness|
    std::uint64_t seed = 0;
    std::vector<std::array<double, 2>> bounds; ///< per-dimension [low, high]

    void validate() const;
};

struct DeReport {
    std::vector<double> best;
    double best_value = 0.0;
    std::vector<double> trace; ///< best fitness after each generation, non-increasing
    int generations = 0;
    std::uint64_t seed = 0;
};

/// Minimizes f over the bounded box with DE/best/1/bin: the best member is
/// mutated by a scaled difference of two random members, binomial crossover
/// runs over the first D-1 coordinates with the last always taken from the
/// mutant, and a trial replaces its candidate when its fitness is <= the
/// candidate's. Population initialization is a seeded Latin hypercube; all
/// random draws come from counter-based streams keyed by (seed, generation,
/// candidate), so evaluations can run in parallel without changing results.
DeReport de_minimize(const std::function<double(const std::vector<double>&)>& f,
                     const DeOptions& opts);

/// Calibration outcome: the estimated parameters, the objective trace and
/// which handedness branch won at the optimum.
struct OptimizerReport {
    GeometryParams best_theta;
    double best_value = 0.0;
    std::vector<double> trace;
    int generations = 0;
    std::uint64_t seed = 0;
    bool mirrored = false;
};

/// Frobenius inner products of a reconstruction with both reference
/// handednesses (the core of the correlation objective).
struct CorrelationPair {
    double with_ref = 0.0;
    double with_mirror = 0.0;
};
CorrelationPair correlation_with_references(const ImageGrid& recon,
                                            const ImageGrid& ref,
                                            const ImageGrid& ref_mirror);

/// Reconstruction-domain objective: negative max correlation between the FBP
/// reconstruction at theta and the two reference handednesses.
double objective_J(const GeometryParams& theta, const CalibProblem& prob);

/// Sinogram-domain alternative: negative max of <A_theta x_ref, y> over both
/// handednesses.
double objective_J_sino(const GeometryParams& theta, const CalibProblem& prob);

/// Runs de_minimize on objective_J over the given bounds (theta layout:
/// [alpha0, r_D, h_S, h_D, alpha_D]).
OptimizerReport calibrate(const CalibProblem& prob, const DeOptions& opts);

/// Wide default search box bracketing plausible scanner geometries.
std::vector<std::array<double, 2>> default_calibration_bounds();

GeometryParams theta_from_vector(const std::vector<double>& x);
std::vector<double> theta_to_vector(const GeometryParams& g);

} // namespace fanbeam

#endif
