#ifndef FANBEAM_IMAGE_HPP
#define FANBEAM_IMAGE_HPP

#include <vector>

#include "fanbeam/geometry.hpp"

namespace fanbeam {

/// Square pixel raster over a physical field of view centered on the COR.
/// Row 0 is the top of the image; pixel (r, c) covers
/// x in [-fov/2 + c*h, -fov/2 + (c+1)*h], y in [fov/2 - (r+1)*h, fov/2 - r*h]
/// with h = fov / n.
struct ImageGrid {
    int n = 0;
    double fov = 0.0; ///< side length of the field of view [mm]
    std::vector<double> values; ///< n*n, row-major

    ImageGrid() = default;
    ImageGrid(int n_, double fov_)
        : n(n_), fov(fov_), values(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double pixel_size() const { return fov / n; }

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * n + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * n + c]; }

    Vec2 pixel_center(int r, int c) const {
        const double h = pixel_size();
        return {-0.5 * fov + (c + 0.5) * h, 0.5 * fov - (r + 0.5) * h};
    }

    void validate() const; ///< throws std::invalid_argument on violation
};

/// Left-right flip (columns reversed). Involution: mirror(mirror(img)) == img.
ImageGrid mirror_image(const ImageGrid& img);

/// Bilinear resampling onto an n_out x n_out grid over the same field of view.
ImageGrid resample_image(const ImageGrid& img, int n_out);

} // namespace fanbeam

#endif
