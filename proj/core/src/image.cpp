#include "fanbeam/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fanbeam {

void ImageGrid::validate() const {
    if (n < 1 || fov <= 0.0)
        throw std::invalid_argument("ImageGrid: n >= 1 and fov > 0 required");
    if (values.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("ImageGrid: values size != n*n");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("ImageGrid: values must be finite");
}

ImageGrid mirror_image(const ImageGrid& img) {
    ImageGrid out(img.n, img.fov);
    for (int r = 0; r < img.n; ++r)
        for (int c = 0; c < img.n; ++c)
            out.at(r, c) = img.at(r, img.n - 1 - c);
    return out;
}

ImageGrid resample_image(const ImageGrid& img, int n_out) {
    if (n_out < 2) throw std::invalid_argument("resample_image: n_out >= 2 required");
    ImageGrid out(n_out, img.fov);
    const double scale = static_cast<double>(img.n) / n_out;
    for (int r = 0; r < n_out; ++r) {
        // fractional coordinates in input pixel index space
        const double rf = (r + 0.5) * scale - 0.5;
        const double r0f = std::floor(rf);
        const double wr = rf - r0f;
        const int r0 = std::clamp(static_cast<int>(r0f), 0, img.n - 1);
        const int r1 = std::clamp(static_cast<int>(r0f) + 1, 0, img.n - 1);
        for (int c = 0; c < n_out; ++c) {
            const double cf = (c + 0.5) * scale - 0.5;
            const double c0f = std::floor(cf);
            const double wc = cf - c0f;
            const int c0 = std::clamp(static_cast<int>(c0f), 0, img.n - 1);
            const int c1 = std::clamp(static_cast<int>(c0f) + 1, 0, img.n - 1);
            const double top = img.at(r0, c0) + wc * (img.at(r0, c1) - img.at(r0, c0));
            const double bot = img.at(r1, c0) + wc * (img.at(r1, c1) - img.at(r1, c0));
            out.at(r, c) = top + wr * (bot - top);
        }
    }
    return out;
}

} // namespace fanbeam
