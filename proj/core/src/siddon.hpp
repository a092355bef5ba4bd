#ifndef FANBEAM_SRC_SIDDON_HPP
#define FANBEAM_SRC_SIDDON_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanbeam/geometry.hpp"

namespace fanbeam::detail {

// Incremental parametric traversal of the segment p0 -> p1 through an n x n
// grid spanning [-fov/2, fov/2]^2. Calls visit(row, col, length_mm) for every
// cell with positive intersection length. The forward and adjoint projectors
// share this routine so they emit identical (cell, length) pairs.
//
// Points exactly on a cell boundary are assigned to the positive-index side
// (floor semantics on the entry coordinates).
template <class Visit>
inline void traverse_grid(int n, double fov, Vec2 p0, Vec2 p1, Visit&& visit) {
    const double inf = std::numeric_limits<double>::infinity();
    const double h = fov / n;
    const double x0 = -0.5 * fov;
    const double y0 = -0.5 * fov;
    const Vec2 d = p1 - p0;
    const double seg_len = d.norm();
    if (seg_len == 0.0) return;

    double tmin = 0.0, tmax = 1.0;
    if (d.x != 0.0) {
        const double t1 = (x0 - p0.x) / d.x;
        const double t2 = (x0 + n * h - p0.x) / d.x;
        tmin = std::max(tmin, std::min(t1, t2));
        tmax = std::min(tmax, std::max(t1, t2));
    } else if (p0.x < x0 || p0.x > x0 + n * h) {
        return;
    }
    if (d.y != 0.0) {
        const double t1 = (y0 - p0.y) / d.y;
        const double t2 = (y0 + n * h - p0.y) / d.y;
        tmin = std::max(tmin, std::min(t1, t2));
        tmax = std::min(tmax, std::max(t1, t2));
    } else if (p0.y < y0 || p0.y > y0 + n * h) {
        return;
    }
    if (tmin >= tmax) return;

    const double ex = p0.x + tmin * d.x;
    const double ey = p0.y + tmin * d.y;
    // iy counts cells bottom-up; image rows count top-down.
    int ix = static_cast<int>(std::floor((ex - x0) / h));
    int iy = static_cast<int>(std::floor((ey - y0) / h));
    // Entry exactly on the far boundary while heading inward.
    if (ix == n && d.x < 0.0) ix = n - 1;
    if (iy == n && d.y < 0.0) iy = n - 1;

    const int step_x = d.x > 0.0 ? 1 : (d.x < 0.0 ? -1 : 0);
    const int step_y = d.y > 0.0 ? 1 : (d.y < 0.0 ? -1 : 0);
    const double t_delta_x = step_x != 0 ? h / std::abs(d.x) : inf;
    const double t_delta_y = step_y != 0 ? h / std::abs(d.y) : inf;

    double t_max_x = inf;
    if (step_x != 0) {
        const double next_x = x0 + (ix + (step_x > 0 ? 1 : 0)) * h;
        t_max_x = (next_x - p0.x) / d.x;
    }
    double t_max_y = inf;
    if (step_y != 0) {
        const double next_y = y0 + (iy + (step_y > 0 ? 1 : 0)) * h;
        t_max_y = (next_y - p0.y) / d.y;
    }

    double t_cur = tmin;
    const int max_steps = 4 * n + 4;
    for (int it = 0; it < max_steps && t_cur < tmax; ++it) {
        const double t_next = std::min({t_max_x, t_max_y, tmax});
        const double len = (t_next - t_cur) * seg_len;
        if (len > 0.0 && ix >= 0 && ix < n && iy >= 0 && iy < n)
            visit(n - 1 - iy, ix, len);
        if (t_next >= tmax) break;
        if (t_max_x <= t_max_y) {
            ix += step_x;
            t_max_x += t_delta_x;
        } else {
            iy += step_y;
            t_max_y += t_delta_y;
        }
        t_cur = t_next;
    }
}

} // namespace fanbeam::detail

#endif
