#ifndef FANBEAM_PROJECTOR_HPP
#define FANBEAM_PROJECTOR_HPP

#include <cstdint>
#include <vector>

#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"

namespace fanbeam {

/// K x M raster of log-domain projection data with its generating angles.
struct Sinogram {
    int k = 0; ///< angle count
    int m = 0; ///< detector element count
    std::vector<double> values; ///< k*m, row-major (one row per angle)
    std::vector<double> angles; ///< k entries [rad]

    Sinogram() = default;
    Sinogram(int k_, int m_)
        : k(k_), m(m_), values(static_cast<std::size_t>(k_) * m_, 0.0),
          angles(static_cast<std::size_t>(k_), 0.0) {}

    double& at(int a, int i) { return values[static_cast<std::size_t>(a) * m + i]; }
    double at(int a, int i) const { return values[static_cast<std::size_t>(a) * m + i]; }
    const double* row(int a) const { return values.data() + static_cast<std::size_t>(a) * m; }
    double* row(int a) { return values.data() + static_cast<std::size_t>(a) * m; }
};

struct NoiseSpec {
    double relative_level = 0.02; ///< noise sigma as a fraction of RMS(data)
    std::uint64_t seed = 0;
};

/// Exact line integral of the image along the segment p0 -> p1 (Siddon-style
/// incremental traversal). Rays missing the grid return 0.
double line_integral(const ImageGrid& img, Vec2 p0, Vec2 p1);

/// y[k][i] = line integral from source k to detector element (k, i).
Sinogram forward_project(const ImageGrid& img, const RaySet& rays);

/// Exact transpose of forward_project: scatters each sample back into the
/// traversed cells weighted by intersection lengths.
ImageGrid adjoint_project(const Sinogram& sino, const RaySet& rays, int n, double fov);

/// Beer-Lambert log transform y = -ln(I / I0) applied elementwise.
Sinogram intensities_to_sinogram(const Sinogram& intensities, double i0);

/// Adds white Gaussian noise with sigma = relative_level * RMS(values).
Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec);

/// Dense system matrix (K*M rows, n*n columns) for brute-force test oracles.
/// Limited to n <= 64.
std::vector<double> system_matrix(const RaySet& rays, int n, double fov);

} // namespace fanbeam

#endif
