// Independent reference implementations used as test oracles. These must not
// share code paths with the library routines they check.
#ifndef FANBEAM_TESTS_ORACLES_HPP
#define FANBEAM_TESTS_ORACLES_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"
#include "fanbeam/metrics.hpp"
#include "fanbeam/projector.hpp"

namespace oracles {

/// Piecewise-constant image value at a physical point (the function the
/// projector integrates); 0 outside the grid.
double image_value_at(const fanbeam::ImageGrid& img, fanbeam::Vec2 p);

/// Dense midpoint-rule numerical integration of the image along p0 -> p1.
double dense_line_integral(const fanbeam::ImageGrid& img, fanbeam::Vec2 p0,
                           fanbeam::Vec2 p1, int samples = 10000);

/// Independently coded source/detector-element coordinates (complex-number
/// rotation instead of explicit basis vectors).
struct RefRay {
    fanbeam::Vec2 source;
    fanbeam::Vec2 det_element;
};
RefRay reference_ray(const fanbeam::ScannerConfig& cfg,
                     const fanbeam::GeometryParams& g, int angle_index,
                     int element_index);

/// Direct two-pass scalar-loop SSIM over fully interior Gaussian windows.
double ssim_reference(const fanbeam::ImageGrid& a, const fanbeam::ImageGrid& b,
                      const fanbeam::SsimOptions& opts);

/// Closed-form discrete ramp kernel sampled at integer offsets, scaled for a
/// detector pitch tau: g(0) = 1/(4 tau), g(n odd) = -1/(pi^2 n^2 tau), 0 else.
double ramp_kernel(int n, double tau);

/// Circular convolution of a zero-padded row with the closed-form ramp
/// kernel on a length-p ring, truncated back to the first m samples.
std::vector<double> ramp_convolve_reference(const std::vector<double>& row,
                                            int padded, double tau);

/// Dense solve of (A'A + alpha I) x = A'y from an explicit system matrix.
std::vector<double> dense_tikhonov_solve(const std::vector<double>& mat,
                                         int rows, int cols,
                                         const std::vector<double>& y,
                                         double alpha);

/// Bilinear sample of an image at a physical point (clamped at borders).
double bilinear_at(const fanbeam::ImageGrid& img, fanbeam::Vec2 p);

fanbeam::ImageGrid random_image(int n, double fov, std::uint64_t seed,
                                double lo = 0.0, double hi = 1.0);
fanbeam::Sinogram random_sinogram(int k, int m, std::uint64_t seed,
                                  double lo = -1.0, double hi = 1.0);

} // namespace oracles

#endif
