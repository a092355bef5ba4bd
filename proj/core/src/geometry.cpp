#include "fanbeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace fanbeam {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

void ScannerConfig::validate() const {
    require(std::isfinite(source_radius) && source_radius > 0.0,
            "ScannerConfig: source_radius must be > 0");
    require(det_count >= 2, "ScannerConfig: det_count must be >= 2");
    require(std::isfinite(det_pixel) && det_pixel > 0.0,
            "ScannerConfig: det_pixel must be > 0");
    require(n_angles >= 1, "ScannerConfig: n_angles must be >= 1");
    require(angular_span > 0.0 && angular_span <= 2.0 * M_PI + 1e-12,
            "ScannerConfig: angular_span must be in (0, 2*pi]");
}

void GeometryParams::validate() const {
    require(std::isfinite(first_angle) && std::isfinite(det_radius) &&
                std::isfinite(source_shift) && std::isfinite(det_shift) &&
                std::isfinite(det_tilt),
            "GeometryParams: all fields must be finite");
    require(det_radius > 0.0, "GeometryParams: det_radius must be > 0");
}

std::vector<double> angle_list(const ScannerConfig& cfg, const GeometryParams& g) {
    cfg.validate();
    g.validate();
    std::vector<double> angles(static_cast<std::size_t>(cfg.n_angles));
    const double step = cfg.angular_span / cfg.n_angles;
    for (int k = 0; k < cfg.n_angles; ++k)
        angles[static_cast<std::size_t>(k)] = g.first_angle + k * step;
    return angles;
}

std::vector<DetectorFrame> detector_frames(const ScannerConfig& cfg,
                                           const GeometryParams& g) {
    const std::vector<double> angles = angle_list(cfg, g);
    std::vector<DetectorFrame> frames(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double phi = angles[k];
        DetectorFrame& f = frames[k];
        f.angle = phi;
        f.radial = {std::cos(phi), std::sin(phi)};
        f.tangent = {-std::sin(phi), std::cos(phi)};
        f.source = -cfg.source_radius * f.radial + g.source_shift * f.tangent;
        f.det_center = g.det_radius * f.radial + g.det_shift * f.tangent;
        Vec2 axis = f.tangent + g.det_tilt * f.radial;
        const double len = axis.norm();
        f.det_axis = {axis.x / len, axis.y / len};
    }
    return frames;
}

RaySet ray_set(const ScannerConfig& cfg, const GeometryParams& g) {
    const std::vector<DetectorFrame> frames = detector_frames(cfg, g);
    RaySet rays;
    rays.n_det = cfg.det_count;
    rays.angles.reserve(frames.size());
    rays.source_pos.reserve(frames.size());
    rays.det_centers.resize(frames.size() * static_cast<std::size_t>(cfg.det_count));
    const double half = 0.5 * (cfg.det_count - 1);
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const DetectorFrame& f = frames[k];
        rays.angles.push_back(f.angle);
        rays.source_pos.push_back(f.source);
        for (int i = 0; i < cfg.det_count; ++i) {
            const double offset = (i - half) * cfg.det_pixel;
            rays.det_centers[k * static_cast<std::size_t>(cfg.det_count) + i] =
                f.det_center + offset * f.det_axis;
        }
    }
    return rays;
}

} // namespace fanbeam
