#ifndef FANBEAM_SRC_FBP_INTERNAL_HPP
#define FANBEAM_SRC_FBP_INTERNAL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "fanbeam/fbp.hpp"
#include "fanbeam/geometry.hpp"
#include "fanbeam/projector.hpp"

namespace fanbeam::detail {

// Backprojection weighting, shared by fbp_reconstruct and the calibration
// objective.
//
// The inversion formula is the parallel-beam FBP after the change of
// variables (phi, t) -> (theta, l) from fan coordinates (rotation angle,
// detector coordinate) to line coordinates (normal angle, signed offset):
//
//   f(x) = 1/2 * integral dphi  W1(phi, x) * (ramp * W2(phi, .) y(phi, .))(t*)
//
// with W2 = |d(theta, l)/d(phi, t)| the data Jacobian, t* the detector
// coordinate of the ray through x, and W1 = 1 / (dl_x/dt)^2 the ramp
// homogeneity factor. For a centered geometry this reduces to the classic
// cos-gamma pre-weight with the r_S * d / U^2 distance weight. Shifted or
// tilted geometries get their exact weights, which keeps the reconstruction
// amplitude stable across hypothesized geometries; the calibration
// correlation objective relies on that.
struct BpFrame {
    Vec2 source;
    Vec2 axis;
    Vec2 b;          ///< detector line center minus source
    double b2 = 0.0; ///< |b|^2
    double ba = 0.0; ///< <b, axis>
    double cross_ba = 0.0;
};

// W2 row (one weight per detector element) and the BpFrame for one angle.
struct FanWeights {
    std::vector<BpFrame> frames;
    std::vector<double> jacobian; ///< n_angles x m, row-major
};

FanWeights fan_weights(const ScannerConfig& cfg, const GeometryParams& g);

// Pre-weights by the data Jacobian and ramp-filters every row.
Sinogram filtered_rows_for_backprojection(const Sinogram& sino,
                                          const ScannerConfig& cfg,
                                          const GeometryParams& g,
                                          FilterSpec filter);

// One pixel-angle sample: exact ray/detector-line intersection, linear
// interpolation of the filtered row, homogeneity weight |V(t*)|^2 / den^2.
inline double backproject_sample(const BpFrame& f, const double* qrow, int m,
                                 double inv_pixel, double half_m, Vec2 p) {
    const double ux = p.x - f.source.x;
    const double uy = p.y - f.source.y;
    const double den = ux * f.axis.y - uy * f.axis.x; // cross(u, axis)
    if (den == 0.0) return 0.0;
    // intersection must lie on the detector side of the source
    if (f.cross_ba * den <= 0.0) return 0.0;
    const double t = (f.b.x * uy - f.b.y * ux) / den; // cross(b, u) / cross(u, a)
    const double idx = t * inv_pixel + half_m;
    if (idx < 0.0 || idx > m - 1) return 0.0;
    const int i0 = std::min(static_cast<int>(idx), m - 2);
    const double frac = idx - i0;
    const double val = qrow[i0] + frac * (qrow[i0 + 1] - qrow[i0]);
    const double v2 = f.b2 + t * (2.0 * f.ba + t); // |V(t*)|^2
    return val * v2 / (den * den);
}

} // namespace fanbeam::detail

#endif
