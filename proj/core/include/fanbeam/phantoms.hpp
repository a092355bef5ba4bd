#ifndef FANBEAM_PHANTOMS_HPP
#define FANBEAM_PHANTOMS_HPP

#include "fanbeam/image.hpp"

namespace fanbeam {

/// L-shaped calibration phantom: union of two axis-aligned rectangles of
/// width arm_width sharing a corner, binary attenuation. Chiral, so its
/// mirror image differs from itself.
struct LPhantomSpec {
    double arm_length = 200.0;  ///< mm, outer side of each arm
    double arm_width = 60.0;    ///< mm
    double attenuation = 0.05;  ///< 1/mm
    Vec2 center_offset{0.0, 0.0}; ///< mm, offset of the bounding-box center

    void validate() const;
};

/// Square block with a circular hole; off-center holes make it chiral.
struct HolePhantomSpec {
    double outer_side = 200.0;  ///< mm
    double hole_radius = 30.0;  ///< mm
    Vec2 hole_offset{30.0, 20.0}; ///< mm, relative to the block center
    double attenuation = 0.05;  ///< 1/mm

    void validate() const;
};

/// Digital log phantom: a disk with concentric rings of alternating
/// attenuation, two elliptical knots, and one small dense foreign object.
struct LogPhantomSpec {
    double radius_fraction = 0.8; ///< log radius as a fraction of fov/2
    int rings = 12;
    double ring_low = 0.04;   ///< 1/mm
    double ring_high = 0.05;  ///< 1/mm
    double knot_value = 0.08; ///< 1/mm, the two knot ellipses
    double foreign_value = 0.5; ///< 1/mm, the foreign-object ellipse
};

ImageGrid make_log_phantom(int n, double fov, const LogPhantomSpec& spec = {});
ImageGrid make_l_phantom(int n, double fov, const LPhantomSpec& spec);
ImageGrid make_hole_phantom(int n, double fov, const HolePhantomSpec& spec);

} // namespace fanbeam

#endif
