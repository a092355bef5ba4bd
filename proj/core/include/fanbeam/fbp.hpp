#ifndef FANBEAM_FBP_HPP
#define FANBEAM_FBP_HPP

#include <string>

#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"
#include "fanbeam/projector.hpp"

namespace fanbeam {

enum class FilterKind { RamLak, SheppLogan, Cosine, Hamming, Hann };

struct FilterSpec {
    FilterKind kind = FilterKind::Hann;
    double cutoff = 1.0; ///< band edge as a fraction of Nyquist, in (0, 1]

    void validate() const;
};

FilterKind filter_from_name(const std::string& name); ///< throws on unknown name
std::string filter_name(FilterKind kind);

/// Ramp-filters every angle row in the frequency domain: rows are zero-padded
/// to the next power of two >= 2m, multiplied by |f| * W(f) over the cutoff
/// band (f in cycles/mm), inverse-transformed and truncated back to m samples.
Sinogram filter_sinogram(const Sinogram& sino, FilterSpec spec, double det_pixel);

/// Fan-beam filtered backprojection onto an n x n grid over the field of
/// view. Samples are cos-gamma pre-weighted, ramp-filtered, then accumulated
/// by pixel-driven backprojection with distance weighting; the interpolation
/// coordinate uses the exact shifted/tilted detector geometry.
ImageGrid fbp_reconstruct(const Sinogram& sino, const ScannerConfig& cfg,
                          const GeometryParams& g, int n, double fov,
                          FilterSpec filter = {});

} // namespace fanbeam

#endif
