#ifndef FANBEAM_RECON_HPP
#define FANBEAM_RECON_HPP

#include <optional>

#include "fanbeam/fbp.hpp"
#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"
#include "fanbeam/projector.hpp"

namespace fanbeam {

struct TikhonovOptions {
    double alpha = 1.0; ///< regularization weight, > 0
    int max_iter = 200;
    double tol = 1e-6; ///< relative normal-equation residual

    void validate() const;
};

struct TikhonovResult {
    ImageGrid image;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0; ///< ||A'(Ax-y) + alpha x|| / ||A'y|| at exit
};

/// Approximate minimizer of ||A x - y||^2 + alpha ||x||^2 by conjugate
/// gradients on the normal equations (matrix-free).
TikhonovResult tikhonov_reconstruct(const Sinogram& sino, const RaySet& rays,
                                    int n, double fov, const TikhonovOptions& opts);

enum class MapInit { Zeros, Fbp };

struct CauchyMapOptions {
    double beta = 0.01; ///< prior scale, > 0
    int max_iter = 400;
    double grad_tol = 1e-6; ///< stop when ||grad|| <= grad_tol * (1 + |F|)
    int memory = 10;        ///< quasi-Newton history length
    MapInit init = MapInit::Fbp;
    std::optional<ImageGrid> init_image; ///< required for MapInit::Fbp on the
                                         ///< RaySet overload

    void validate() const;
};

struct MapResult {
    ImageGrid image;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    double objective = 0.0;
};

/// Prior part of the negative log posterior:
/// (3/2) * sum_{i,j < N-1} log(beta^2 + dv^2 + dh^2) with the forward
/// differences dv, dh at (i, j).
double cauchy_prior_term(const ImageGrid& x, double beta);

/// F(x) = 0.5 ||A x - y||^2 + cauchy_prior_term(x, beta).
double cauchy_neg_log_posterior(const ImageGrid& x, const Sinogram& sino,
                                const RaySet& rays, double beta);

/// Exact analytic gradient of cauchy_neg_log_posterior.
ImageGrid cauchy_gradient(const ImageGrid& x, const Sinogram& sino,
                          const RaySet& rays, double beta);

/// Minimizes the negative log posterior by limited-memory quasi-Newton
/// descent with a backtracking (sufficient-decrease) line search. The
/// objective is non-increasing across accepted iterations.
MapResult map_reconstruct(const Sinogram& sino, const RaySet& rays, int n,
                          double fov, const CauchyMapOptions& opts);

/// Convenience overload that builds the ray set and, for MapInit::Fbp, the
/// nonnegativity-clamped FBP initializer itself.
MapResult map_reconstruct(const Sinogram& sino, const ScannerConfig& cfg,
                          const GeometryParams& g, int n, double fov,
                          const CauchyMapOptions& opts, FilterSpec filter = {});

} // namespace fanbeam

#endif
