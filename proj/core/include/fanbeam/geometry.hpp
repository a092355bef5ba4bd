#ifndef FANBEAM_GEOMETRY_HPP
#define FANBEAM_GEOMETRY_HPP

#include <cmath>
#include <vector>

namespace fanbeam {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Fixed scanner constants of the fan-beam acquisition: source-to-COR
/// distance, flat-line detector layout, and the angular sampling scheme.
struct ScannerConfig {
    double source_radius = 859.46; ///< r_S, source to centre of rotation [mm]
    int det_count = 768;           ///< number of detector elements
    double det_pixel = 2.0;        ///< detector element pitch [mm]
    int n_angles = 360;            ///< number of acquisition angles
    double angular_span = 2.0 * M_PI; ///< total sweep [rad], endpoint-exclusive

    void validate() const; ///< throws std::invalid_argument on violation
};

/// The five geometry parameters estimated by calibration.
struct GeometryParams {
    double first_angle = 0.0;  ///< alpha_0, first scanning angle [rad]
    double det_radius = 715.0; ///< r_D, COR to detector distance [mm]
    double source_shift = 0.0; ///< h_S, source tangential shift [mm]
    double det_shift = 0.0;    ///< h_D, detector tangential shift [mm]
    double det_tilt = 0.0;     ///< alpha_D, tilt component of the detector axis

    void validate() const;
};

/// Per-angle acquisition frame in object coordinates. The detector axis is
/// the renormalized (e_t + alpha_D * e_r), so tilt changes orientation only,
/// not element pitch.
struct DetectorFrame {
    double angle = 0.0;
    Vec2 radial;     ///< e_r = (cos phi, sin phi)
    Vec2 tangent;    ///< e_t = (-sin phi, cos phi)
    Vec2 source;     ///< -r_S * e_r + h_S * e_t
    Vec2 det_center; ///< r_D * e_r + h_D * e_t
    Vec2 det_axis;   ///< normalize(e_t + alpha_D * e_r)
};

/// Explicit per-angle source point and detector element centers.
struct RaySet {
    std::vector<double> angles;    ///< K entries
    std::vector<Vec2> source_pos;  ///< K entries
    std::vector<Vec2> det_centers; ///< K*M entries, row-major per angle
    int n_det = 0;

    int n_angles() const { return static_cast<int>(angles.size()); }
    Vec2 det_center(int k, int i) const {
        return det_centers[static_cast<std::size_t>(k) * n_det + i];
    }
};

/// Acquisition angles phi_k = alpha_0 + k * span / K, k = 0..K-1.
std::vector<double> angle_list(const ScannerConfig& cfg, const GeometryParams& g);

std::vector<DetectorFrame> detector_frames(const ScannerConfig& cfg,
                                           const GeometryParams& g);

/// Materializes every source point and detector element center for all angles.
RaySet ray_set(const ScannerConfig& cfg, const GeometryParams& g);

} // namespace fanbeam

#endif
