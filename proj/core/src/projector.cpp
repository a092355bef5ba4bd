#include "fanbeam/projector.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fanbeam/parallel.hpp"
#include "siddon.hpp"

namespace fanbeam {

double line_integral(const ImageGrid& img, Vec2 p0, Vec2 p1) {
    if (p0.x == p1.x && p0.y == p1.y)
        throw std::invalid_argument("line_integral: p0 and p1 must differ");
    double sum = 0.0;
    detail::traverse_grid(img.n, img.fov, p0, p1, [&](int r, int c, double len) {
        sum += len * img.at(r, c);
    });
    return sum;
}

Sinogram forward_project(const ImageGrid& img, const RaySet& rays) {
    const int k = rays.n_angles();
    const int m = rays.n_det;
    Sinogram sino(k, m);
    sino.angles = rays.angles;
    parallel_for(0, k, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t a = lo; a < hi; ++a) {
            const Vec2 src = rays.source_pos[static_cast<std::size_t>(a)];
            double* out = sino.row(static_cast<int>(a));
            for (int i = 0; i < m; ++i) {
                double sum = 0.0;
                detail::traverse_grid(img.n, img.fov, src,
                                      rays.det_center(static_cast<int>(a), i),
                                      [&](int r, int c, double len) {
                                          sum += len * img.at(r, c);
                                      });
                out[i] = sum;
            }
        }
    });
    return sino;
}

ImageGrid adjoint_project(const Sinogram& sino, const RaySet& rays, int n, double fov) {
    if (sino.k != rays.n_angles() || sino.m != rays.n_det)
        throw std::invalid_argument("adjoint_project: sinogram dims do not match ray set");
    ImageGrid img(n, fov);

    const int chunks = std::max(1, std::min(thread_count(), sino.k));
    std::vector<std::vector<double>> partial(
        static_cast<std::size_t>(chunks),
        std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));

    parallel_for(0, chunks, [&](std::int64_t clo, std::int64_t chi) {
        for (std::int64_t c = clo; c < chi; ++c) {
            std::vector<double>& buf = partial[static_cast<std::size_t>(c)];
            const int alo = static_cast<int>(sino.k * c / chunks);
            const int ahi = static_cast<int>(sino.k * (c + 1) / chunks);
            for (int a = alo; a < ahi; ++a) {
                const Vec2 src = rays.source_pos[static_cast<std::size_t>(a)];
                const double* row = sino.row(a);
                for (int i = 0; i < sino.m; ++i) {
                    const double v = row[i];
                    if (v == 0.0) continue;
                    detail::traverse_grid(n, fov, src, rays.det_center(a, i),
                                          [&](int r, int cc, double len) {
                                              buf[static_cast<std::size_t>(r) * n + cc] +=
                                                  len * v;
                                          });
                }
            }
        }
    });

    // merge in fixed chunk order so results are bit-stable at a fixed
    // worker count
    for (int c = 0; c < chunks; ++c)
        for (std::size_t p = 0; p < img.values.size(); ++p)
            img.values[p] += partial[static_cast<std::size_t>(c)][p];
    return img;
}

Sinogram intensities_to_sinogram(const Sinogram& intensities, double i0) {
    if (!(i0 > 0.0))
        throw std::invalid_argument("intensities_to_sinogram: I0 must be > 0");
    Sinogram out = intensities;
    for (double& v : out.values) {
        if (!(v > 0.0))
            throw std::invalid_argument(
                "intensities_to_sinogram: intensities must be > 0");
        v = -std::log(v / i0);
    }
    return out;
}

Sinogram add_noise(const Sinogram& sino, const NoiseSpec& spec) {
    if (spec.relative_level < 0.0)
        throw std::invalid_argument("add_noise: relative_level must be >= 0");
    Sinogram out = sino;
    if (spec.relative_level == 0.0 || sino.values.empty()) return out;

    double sq = 0.0;
    for (double v : sino.values) sq += v * v;
    const double rms = std::sqrt(sq / static_cast<double>(sino.values.size()));
    const double sigma = spec.relative_level * rms;
    if (sigma == 0.0) return out;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (double& v : out.values) v += gauss(rng);
    return out;
}

std::vector<double> system_matrix(const RaySet& rays, int n, double fov) {
    if (n > 64)
        throw std::invalid_argument("system_matrix: n <= 64 required");
    const std::size_t cols = static_cast<std::size_t>(n) * n;
    const std::size_t rows =
        static_cast<std::size_t>(rays.n_angles()) * rays.n_det;
    std::vector<double> mat(rows * cols, 0.0);
    for (int a = 0; a < rays.n_angles(); ++a) {
        const Vec2 src = rays.source_pos[static_cast<std::size_t>(a)];
        for (int i = 0; i < rays.n_det; ++i) {
            double* row =
                mat.data() + (static_cast<std::size_t>(a) * rays.n_det + i) * cols;
            detail::traverse_grid(n, fov, src, rays.det_center(a, i),
                                  [&](int r, int c, double len) {
                                      row[static_cast<std::size_t>(r) * n + c] += len;
                                  });
        }
    }
    return mat;
}

} // namespace fanbeam
