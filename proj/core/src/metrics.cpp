#include "fanbeam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fanbeam {

void SsimOptions::validate() const {
    if (window < 3 || window % 2 == 0)
        throw std::invalid_argument("SsimOptions: window must be odd and >= 3");
    if (!(sigma > 0.0) || !(k1 > 0.0) || !(k2 > 0.0))
        throw std::invalid_argument("SsimOptions: sigma, k1, k2 must be > 0");
}

double relative_error(const ImageGrid& estimate, const ImageGrid& reference) {
    if (estimate.n != reference.n)
        throw std::invalid_argument("relative_error: dimension mismatch");
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < reference.values.size(); ++i) {
        const double d = estimate.values[i] - reference.values[i];
        diff += d * d;
        ref += reference.values[i] * reference.values[i];
    }
    if (ref == 0.0)
        throw std::invalid_argument("relative_error: reference norm is zero");
    return std::sqrt(diff / ref);
}

double ssim(const ImageGrid& estimate, const ImageGrid& reference,
            const SsimOptions& opts) {
    opts.validate();
    if (estimate.n != reference.n)
        throw std::invalid_argument("ssim: dimension mismatch");
    const int n = reference.n;
    const int w = opts.window;
    if (n < w)
        throw std::invalid_argument("ssim: image smaller than the window");

    double range = opts.data_range;
    if (range <= 0.0) {
        const auto [lo, hi] =
            std::minmax_element(reference.values.begin(), reference.values.end());
        range = *hi - *lo;
        if (range == 0.0) range = 1.0;
    }
    const double c1 = (opts.k1 * range) * (opts.k1 * range);
    const double c2 = (opts.k2 * range) * (opts.k2 * range);

    // normalized separable Gaussian weights
    std::vector<double> g(static_cast<std::size_t>(w));
    const int half = w / 2;
    double sum = 0.0;
    for (int i = 0; i < w; ++i) {
        const double d = i - half;
        g[static_cast<std::size_t>(i)] = std::exp(-0.5 * d * d / (opts.sigma * opts.sigma));
        sum += g[static_cast<std::size_t>(i)];
    }
    for (double& v : g) v /= sum;

    double total = 0.0;
    long count = 0;
    for (int r = half; r < n - half; ++r) {
        for (int c = half; c < n - half; ++c) {
            double m1 = 0.0, m2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
            for (int dr = -half; dr <= half; ++dr) {
                for (int dc = -half; dc <= half; ++dc) {
                    const double wgt = g[static_cast<std::size_t>(dr + half)] *
                                       g[static_cast<std::size_t>(dc + half)];
                    const double a = estimate.at(r + dr, c + dc);
                    const double b = reference.at(r + dr, c + dc);
                    m1 += wgt * a;
                    m2 += wgt * b;
                    s11 += wgt * a * a;
                    s22 += wgt * b * b;
                    s12 += wgt * a * b;
                }
            }
            const double var1 = s11 - m1 * m1;
            const double var2 = s22 - m2 * m2;
            const double cov = s12 - m1 * m2;
            const double num = (2.0 * m1 * m2 + c1) * (2.0 * cov + c2);
            const double den = (m1 * m1 + m2 * m2 + c1) * (var1 + var2 + c2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

} // namespace fanbeam
