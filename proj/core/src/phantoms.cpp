#include "fanbeam/phantoms.hpp"

#include <cmath>
#include <stdexcept>

namespace fanbeam {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

struct Ellipse {
    Vec2 center;
    double a; ///< semi-axis along the rotated x direction [mm]
    double b;
    double angle; ///< rotation [rad]

    bool contains(Vec2 p) const {
        const double dx = p.x - center.x;
        const double dy = p.y - center.y;
        const double co = std::cos(angle);
        const double si = std::sin(angle);
        const double u = (dx * co + dy * si) / a;
        const double v = (-dx * si + dy * co) / b;
        return u * u + v * v <= 1.0;
    }
};

} // namespace

void LPhantomSpec::validate() const {
    require(arm_length > arm_width && arm_width > 0.0,
            "LPhantomSpec: arm_length > arm_width > 0 required");
    require(attenuation > 0.0, "LPhantomSpec: attenuation must be > 0");
}

void HolePhantomSpec::validate() const {
    require(outer_side > 0.0, "HolePhantomSpec: outer_side must be > 0");
    require(hole_radius > 0.0, "HolePhantomSpec: hole_radius must be > 0");
    require(attenuation > 0.0, "HolePhantomSpec: attenuation must be > 0");
    const double half = 0.5 * outer_side;
    require(std::abs(hole_offset.x) + hole_radius < half &&
                std::abs(hole_offset.y) + hole_radius < half,
            "HolePhantomSpec: hole must lie strictly inside the block");
}

ImageGrid make_log_phantom(int n, double fov, const LogPhantomSpec& spec) {
    require(n >= 16, "make_log_phantom: n >= 16 required to resolve features");
    require(fov > 0.0, "make_log_phantom: fov must be > 0");
    require(spec.rings >= 1 && spec.radius_fraction > 0.0 && spec.radius_fraction <= 1.0,
            "make_log_phantom: invalid spec");

    const double radius = spec.radius_fraction * 0.5 * fov;
    const double ring_width = radius / spec.rings;

    // Knots and the foreign object, placed well inside the log.
    const Ellipse knot1{{0.35 * radius, 0.15 * radius}, 25.0 * radius / 200.0,
                        10.0 * radius / 200.0, 0.5};
    const Ellipse knot2{{-0.30 * radius, -0.35 * radius}, 25.0 * radius / 200.0,
                        10.0 * radius / 200.0, 2.0};
    const Ellipse foreign{{0.10 * radius, -0.45 * radius}, 6.0 * radius / 200.0,
                          4.0 * radius / 200.0, 0.0};

    ImageGrid img(n, fov);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Vec2 p = img.pixel_center(r, c);
            if (foreign.contains(p)) {
                img.at(r, c) = spec.foreign_value;
            } else if (knot1.contains(p) || knot2.contains(p)) {
                img.at(r, c) = spec.knot_value;
            } else {
                const double rad = p.norm();
                if (rad < radius) {
                    const int ring = static_cast<int>(rad / ring_width);
                    img.at(r, c) = (ring % 2 == 0) ? spec.ring_high : spec.ring_low;
                }
            }
        }
    }
    return img;
}

ImageGrid make_l_phantom(int n, double fov, const LPhantomSpec& spec) {
    spec.validate();
    require(n >= 2, "make_l_phantom: n >= 2 required");
    require(fov > 0.0, "make_l_phantom: fov must be > 0");
    const double len = spec.arm_length;
    const double wid = spec.arm_width;
    // Bounding box [len x len] centered on center_offset must fit in the fov.
    const double half = 0.5 * len;
    require(std::abs(spec.center_offset.x) + half <= 0.5 * fov &&
                std::abs(spec.center_offset.y) + half <= 0.5 * fov,
            "make_l_phantom: phantom does not fit in the field of view");

    ImageGrid img(n, fov);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Vec2 p = img.pixel_center(r, c);
            // local coordinates with the shared corner at the origin
            const double lx = p.x - spec.center_offset.x + half;
            const double ly = p.y - spec.center_offset.y + half;
            const bool vertical_arm = lx >= 0.0 && lx <= wid && ly >= 0.0 && ly <= len;
            const bool horizontal_arm = lx >= 0.0 && lx <= len && ly >= 0.0 && ly <= wid;
            if (vertical_arm || horizontal_arm) img.at(r, c) = spec.attenuation;
        }
    }
    return img;
}

ImageGrid make_hole_phantom(int n, double fov, const HolePhantomSpec& spec) {
    spec.validate();
    require(n >= 2, "make_hole_phantom: n >= 2 required");
    require(fov > 0.0, "make_hole_phantom: fov must be > 0");
    const double half = 0.5 * spec.outer_side;

    ImageGrid img(n, fov);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Vec2 p = img.pixel_center(r, c);
            if (std::abs(p.x) > half || std::abs(p.y) > half) continue;
            const double dx = p.x - spec.hole_offset.x;
            const double dy = p.y - spec.hole_offset.y;
            if (dx * dx + dy * dy < spec.hole_radius * spec.hole_radius) continue;
            img.at(r, c) = spec.attenuation;
        }
    }
    return img;
}

} // namespace fanbeam
