#ifndef FANBEAM_BENCH_COMMON_HPP
#define FANBEAM_BENCH_COMMON_HPP

#include "fanbeam/geometry.hpp"
#include "fanbeam/phantoms.hpp"
#include "fanbeam/projector.hpp"

namespace bench {

inline fanbeam::ScannerConfig scan(int angles, int det = 768) {
    fanbeam::ScannerConfig cfg;
    cfg.n_angles = angles;
    cfg.det_count = det;
    return cfg;
}

inline fanbeam::GeometryParams scan_params() {
    fanbeam::GeometryParams g;
    g.first_angle = 2.55;
    g.det_radius = 715.0;
    g.source_shift = 320.0;
    g.det_shift = 44.0;
    g.det_tilt = 0.28;
    return g;
}

} // namespace bench

#endif
