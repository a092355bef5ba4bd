#include "fanbeam/fbp.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fanbeam/parallel.hpp"
#include "fbp_internal.hpp"
#include "fft_util.hpp"

namespace fanbeam {

namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

double window_value(FilterKind kind, double g) {
    switch (kind) {
    case FilterKind::RamLak:
        return 1.0;
    case FilterKind::SheppLogan:
        return g == 0.0 ? 1.0 : std::sin(0.5 * M_PI * g) / (0.5 * M_PI * g);
    case FilterKind::Cosine:
        return std::cos(0.5 * M_PI * g);
    case FilterKind::Hamming:
        return 0.54 + 0.46 * std::cos(M_PI * g);
    case FilterKind::Hann:
        return 0.5 * (1.0 + std::cos(M_PI * g));
    }
    return 1.0;
}

} // namespace

void FilterSpec::validate() const {
    if (!(cutoff > 0.0) || cutoff > 1.0)
        throw std::invalid_argument("FilterSpec: cutoff must be in (0, 1]");
}

FilterKind filter_from_name(const std::string& name) {
    if (name == "ramlak") return FilterKind::RamLak;
    if (name == "shepplogan") return FilterKind::SheppLogan;
    if (name == "cosine") return FilterKind::Cosine;
    if (name == "hamming") return FilterKind::Hamming;
    if (name == "hann") return FilterKind::Hann;
    throw std::invalid_argument("unknown filter name: " + name);
}

std::string filter_name(FilterKind kind) {
    switch (kind) {
    case FilterKind::RamLak: return "ramlak";
    case FilterKind::SheppLogan: return "shepplogan";
    case FilterKind::Cosine: return "cosine";
    case FilterKind::Hamming: return "hamming";
    case FilterKind::Hann: return "hann";
    }
    return "hann";
}

Sinogram filter_sinogram(const Sinogram& sino, FilterSpec spec, double det_pixel) {
    spec.validate();
    if (sino.m < 2)
        throw std::invalid_argument("filter_sinogram: m >= 2 required");
    if (!(det_pixel > 0.0))
        throw std::invalid_argument("filter_sinogram: det_pixel must be > 0");

    const int m = sino.m;
    const int padded = next_pow2(2 * m);
    const int bins = padded / 2 + 1;

    // |f| * W(f) over the cutoff band, f in cycles/mm, Nyquist = 1/(2*pixel)
    std::vector<double> gain(static_cast<std::size_t>(bins), 0.0);
    for (int j = 0; j < bins; ++j) {
        const double frac = 2.0 * j / padded; // fraction of Nyquist
        if (frac > spec.cutoff) continue;
        const double freq = j / (padded * det_pixel);
        gain[static_cast<std::size_t>(j)] =
            freq * window_value(spec.kind, frac / spec.cutoff);
    }

    Sinogram out(sino.k, sino.m);
    out.angles = sino.angles;
    parallel_for(0, sino.k, [&](std::int64_t lo, std::int64_t hi) {
        detail::RowFft fft(padded);
        std::vector<double> row(static_cast<std::size_t>(padded), 0.0);
        std::vector<std::complex<double>> spec_buf(static_cast<std::size_t>(bins));
        for (std::int64_t a = lo; a < hi; ++a) {
            const double* in = sino.row(static_cast<int>(a));
            std::copy(in, in + m, row.begin());
            std::fill(row.begin() + m, row.end(), 0.0);
            fft.forward(row.data(), spec_buf.data());
            for (int j = 0; j < bins; ++j)
                spec_buf[static_cast<std::size_t>(j)] *= gain[static_cast<std::size_t>(j)];
            fft.inverse(spec_buf.data(), row.data());
            std::copy(row.begin(), row.begin() + m, out.row(static_cast<int>(a)));
        }
    });
    return out;
}

namespace detail {

FanWeights fan_weights(const ScannerConfig& cfg, const GeometryParams& g) {
    const std::vector<DetectorFrame> frames = detector_frames(cfg, g);
    const int m = cfg.det_count;
    const double half = 0.5 * (m - 1);
    const double nu = std::sqrt(1.0 + g.det_tilt * g.det_tilt);

    FanWeights w;
    w.frames.resize(frames.size());
    w.jacobian.resize(frames.size() * static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const DetectorFrame& f = frames[k];
        BpFrame& bp = w.frames[k];
        bp.source = f.source;
        bp.axis = f.det_axis;
        bp.b = f.det_center - f.source;
        bp.b2 = bp.b.dot(bp.b);
        bp.ba = bp.b.dot(f.det_axis);
        bp.cross_ba = bp.b.cross(f.det_axis);

        // phi-derivatives of the frame (e_r' = e_t, e_t' = -e_r)
        const Vec2 s_phi = -g.source_shift * f.radial - cfg.source_radius * f.tangent;
        const Vec2 c_phi = -g.det_shift * f.radial + g.det_radius * f.tangent;
        const Vec2 b_phi = c_phi - s_phi;
        const Vec2 a_phi{(-f.radial.x + g.det_tilt * f.tangent.x) / nu,
                         (-f.radial.y + g.det_tilt * f.tangent.y) / nu};

        double* row = w.jacobian.data() + k * static_cast<std::size_t>(m);
        for (int i = 0; i < m; ++i) {
            const double t = (i - half) * cfg.det_pixel;
            const Vec2 v = bp.b + t * f.det_axis;
            const Vec2 v_phi = b_phi + t * a_phi;
            const double v2 = v.dot(v);
            const double vnorm = std::sqrt(v2);
            const double ell = v.cross(bp.source) / vnorm;
            const double dtheta_dphi = v.cross(v_phi) / v2;
            const double dtheta_dt = v.cross(f.det_axis) / v2;
            const double dell_dt =
                f.det_axis.cross(bp.source) / vnorm - ell * v.dot(f.det_axis) / v2;
            const double dell_dphi = (v_phi.cross(bp.source) + v.cross(s_phi)) / vnorm -
                                     ell * v.dot(v_phi) / v2;
            row[i] = std::abs(dtheta_dphi * dell_dt - dtheta_dt * dell_dphi);
        }
    }
    return w;
}

Sinogram filtered_rows_for_backprojection(const Sinogram& sino,
                                          const ScannerConfig& cfg,
                                          const GeometryParams& g,
                                          FilterSpec filter) {
    const FanWeights w = fan_weights(cfg, g);
    Sinogram weighted = sino;
    for (int a = 0; a < sino.k; ++a) {
        double* row = weighted.row(a);
        const double* jac = w.jacobian.data() + static_cast<std::size_t>(a) * sino.m;
        for (int i = 0; i < sino.m; ++i) row[i] *= jac[i];
    }
    return filter_sinogram(weighted, filter, cfg.det_pixel);
}

} // namespace detail

ImageGrid fbp_reconstruct(const Sinogram& sino, const ScannerConfig& cfg,
                          const GeometryParams& g, int n, double fov,
                          FilterSpec filter) {
    cfg.validate();
    g.validate();
    filter.validate();
    if (sino.k != cfg.n_angles || sino.m != cfg.det_count)
        throw std::invalid_argument("fbp_reconstruct: sinogram dims do not match config");
    if (n < 1 || !(fov > 0.0))
        throw std::invalid_argument("fbp_reconstruct: invalid grid");

    const Sinogram q = detail::filtered_rows_for_backprojection(sino, cfg, g, filter);
    const detail::FanWeights w = detail::fan_weights(cfg, g);
    const double inv_pixel = 1.0 / cfg.det_pixel;
    const double half_m = 0.5 * (sino.m - 1);
    const double scale = 0.5 * cfg.angular_span / cfg.n_angles;

    ImageGrid img(n, fov);
    parallel_for(0, n, [&](std::int64_t rlo, std::int64_t rhi) {
        const std::size_t block = static_cast<std::size_t>(rhi - rlo) * n;
        std::vector<double> acc(block, 0.0);
        for (std::size_t k = 0; k < w.frames.size(); ++k) {
            const detail::BpFrame& f = w.frames[k];
            const double* qrow = q.row(static_cast<int>(k));
            std::size_t idx = 0;
            for (std::int64_t r = rlo; r < rhi; ++r) {
                for (int c = 0; c < n; ++c, ++idx) {
                    const Vec2 p = img.pixel_center(static_cast<int>(r), c);
                    acc[idx] += detail::backproject_sample(f, qrow, sino.m,
                                                           inv_pixel, half_m, p);
                }
            }
        }
        std::size_t idx = 0;
        for (std::int64_t r = rlo; r < rhi; ++r)
            for (int c = 0; c < n; ++c, ++idx) {
                const double v = acc[idx] * scale;
                img.at(static_cast<int>(r), c) = std::isfinite(v) ? v : 0.0;
            }
    });
    return img;
}

} // namespace fanbeam
