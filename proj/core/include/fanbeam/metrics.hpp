#ifndef FANBEAM_METRICS_HPP
#define FANBEAM_METRICS_HPP

#include "fanbeam/image.hpp"

namespace fanbeam {

struct SsimOptions {
    int window = 11;      ///< Gaussian window side, odd and >= 3
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 0.0; ///< dynamic range L; <= 0 means max-min of the reference

    void validate() const;
};

/// ||estimate - reference||_2 / ||reference||_2 over the flattened images.
double relative_error(const ImageGrid& estimate, const ImageGrid& reference);

/// Mean local SSIM with Gaussian weighting over all fully interior windows.
double ssim(const ImageGrid& estimate, const ImageGrid& reference,
            const SsimOptions& opts = {});

} // namespace fanbeam

#endif
