#ifndef FANBEAM_IO_HPP
#define FANBEAM_IO_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "fanbeam/geometry.hpp"
#include "fanbeam/image.hpp"
#include "fanbeam/projector.hpp"

namespace fanbeam {

/// Raster persistence errors. Distinct types so callers can tell a corrupt
/// payload from a malformed header.
struct RasterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChecksumError : RasterError {
    using RasterError::RasterError;
};
struct DimensionError : RasterError {
    using RasterError::RasterError;
};
struct DtypeError : RasterError {
    using RasterError::RasterError;
};

/// Sinogram together with the scan description that produced it; this is
/// what a sinogram raster file stores.
struct SinogramBundle {
    Sinogram sino;
    ScannerConfig cfg;
    GeometryParams geom;
};

/// Rasters are stored as a JSON header `<path>.json` plus a raw row-major
/// little-endian float64 payload `<path>.bin` with a CRC32 checksum.
/// write -> read round-trips bit-exactly.
void write_raster(const std::string& path, const ImageGrid& img);
void write_raster(const std::string& path, const SinogramBundle& bundle);

/// Kind string ("image" or "sinogram") from the header.
std::string raster_kind(const std::string& path);

ImageGrid read_image_raster(const std::string& path);
SinogramBundle read_sinogram_raster(const std::string& path);

/// 16-bit binary PGM (P5) with values affinely mapped from [min, max] to
/// [0, 65535]; constant images map to mid-gray 32768.
void export_pgm(const ImageGrid& img, const std::string& path);

/// Geometry parameter file: a flat JSON object with keys alpha0, r_D, h_S,
/// h_D, alpha_D, r_S, n_D, det_pixel_mm, n_angles, angular_span.
void write_geometry_json(const std::string& path, const ScannerConfig& cfg,
                         const GeometryParams& g);
std::pair<ScannerConfig, GeometryParams> read_geometry_json(const std::string& path);

} // namespace fanbeam

#endif
