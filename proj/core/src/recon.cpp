#include "fanbeam/recon.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace fanbeam {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// residual r = A x - y as a sinogram-shaped vector
std::vector<double> data_residual(const ImageGrid& x, const Sinogram& sino,
                                  const RaySet& rays) {
    Sinogram ax = forward_project(x, rays);
    std::vector<double> r(ax.values.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = ax.values[i] - sino.values[i];
    return r;
}

// adds the prior gradient of cauchy_prior_term to g
void add_prior_gradient(const ImageGrid& x, double beta, std::vector<double>& g) {
    const int n = x.n;
    const double b2 = beta * beta;
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j) {
            const double center = x.at(i, j);
            const double dv = x.at(i + 1, j) - center;
            const double dh = x.at(i, j + 1) - center;
            const double w = 3.0 / (b2 + dv * dv + dh * dh);
            g[static_cast<std::size_t>(i) * n + j] -= w * (dv + dh);
            g[static_cast<std::size_t>(i + 1) * n + j] += w * dv;
            g[static_cast<std::size_t>(i) * n + j + 1] += w * dh;
        }
    }
}

} // namespace

void TikhonovOptions::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("TikhonovOptions: alpha must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("TikhonovOptions: tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("TikhonovOptions: max_iter >= 1");
}

void CauchyMapOptions::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("CauchyMapOptions: beta must be > 0");
    if (memory < 1) throw std::invalid_argument("CauchyMapOptions: memory >= 1");
    if (max_iter < 1) throw std::invalid_argument("CauchyMapOptions: max_iter >= 1");
    if (!(grad_tol > 0.0))
        throw std::invalid_argument("CauchyMapOptions: grad_tol must be > 0");
}

TikhonovResult tikhonov_reconstruct(const Sinogram& sino, const RaySet& rays,
                                    int n, double fov, const TikhonovOptions& opts) {
    opts.validate();
    if (sino.k != rays.n_angles() || sino.m != rays.n_det)
        throw std::invalid_argument("tikhonov_reconstruct: dims do not match ray set");

    TikhonovResult res;
    res.image = ImageGrid(n, fov);

    // normal-equations operator (A'A + alpha I) applied matrix-free
    auto apply = [&](const std::vector<double>& v) {
        ImageGrid xv(n, fov);
        xv.values = v;
        Sinogram av = forward_project(xv, rays);
        ImageGrid atav = adjoint_project(av, rays, n, fov);
        std::vector<double> out = std::move(atav.values);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += opts.alpha * v[i];
        return out;
    };

    ImageGrid aty_img = adjoint_project(sino, rays, n, fov);
    const std::vector<double> b = std::move(aty_img.values);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) { // zero data: x = 0 is the exact minimizer
        res.converged = true;
        return res;
    }

    std::vector<double>& x = res.image.values;
    std::vector<double> r = b; // r = b - (A'A + alpha) * 0
    std::vector<double> p = r;
    double rr = dot(r, r);
    for (int it = 0; it < opts.max_iter; ++it) {
        const std::vector<double> ap = apply(p);
        const double p_ap = dot(p, ap);
        if (p_ap <= 0.0) break; // numerical breakdown; operator is SPD
        const double step = rr / p_ap;
        axpy(step, p, x);
        axpy(-step, ap, r);
        const double rr_new = dot(r, r);
        res.iterations = it + 1;
        if (std::sqrt(rr_new) <= opts.tol * bnorm) {
            res.converged = true;
            rr = rr_new;
            break;
        }
        const double ratio = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + ratio * p[i];
    }
    res.residual = std::sqrt(rr) / bnorm;
    if (res.residual <= opts.tol) res.converged = true;
    return res;
}

double cauchy_prior_term(const ImageGrid& x, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("cauchy_prior_term: beta must be > 0");
    const int n = x.n;
    const double b2 = beta * beta;
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j) {
            const double center = x.at(i, j);
            const double dv = x.at(i + 1, j) - center;
            const double dh = x.at(i, j + 1) - center;
            sum += std::log(b2 + dv * dv + dh * dh);
        }
    }
    return 1.5 * sum;
}

double cauchy_neg_log_posterior(const ImageGrid& x, const Sinogram& sino,
                                const RaySet& rays, double beta) {
    const std::vector<double> r = data_residual(x, sino, rays);
    return 0.5 * dot(r, r) + cauchy_prior_term(x, beta);
}

ImageGrid cauchy_gradient(const ImageGrid& x, const Sinogram& sino,
                          const RaySet& rays, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("cauchy_gradient: beta must be > 0");
    Sinogram resid = sino;
    {
        const std::vector<double> r = data_residual(x, sino, rays);
        resid.values = r;
    }
    ImageGrid g = adjoint_project(resid, rays, x.n, x.fov);
    add_prior_gradient(x, beta, g.values);
    return g;
}

namespace {

// value and gradient sharing one forward projection
double value_and_gradient(const ImageGrid& x, const Sinogram& sino,
                          const RaySet& rays, double beta,
                          std::vector<double>& grad) {
    Sinogram resid = sino;
    resid.values = data_residual(x, sino, rays);
    ImageGrid at = adjoint_project(resid, rays, x.n, x.fov);
    grad = std::move(at.values);
    add_prior_gradient(x, beta, grad);
    return 0.5 * dot(resid.values, resid.values) + cauchy_prior_term(x, beta);
}

double value_only(const ImageGrid& x, const Sinogram& sino, const RaySet& rays,
                  double beta) {
    const std::vector<double> r = data_residual(x, sino, rays);
    return 0.5 * dot(r, r) + cauchy_prior_term(x, beta);
}

} // namespace

MapResult map_reconstruct(const Sinogram& sino, const RaySet& rays, int n,
                          double fov, const CauchyMapOptions& opts) {
    opts.validate();
    if (sino.k != rays.n_angles() || sino.m != rays.n_det)
        throw std::invalid_argument("map_reconstruct: dims do not match ray set");

    MapResult res;
    if (opts.init == MapInit::Fbp) {
        if (!opts.init_image)
            throw std::invalid_argument(
                "map_reconstruct: MapInit::Fbp requires init_image (or use the "
                "ScannerConfig overload)");
        res.image = *opts.init_image;
        if (res.image.n != n)
            throw std::invalid_argument("map_reconstruct: init_image size mismatch");
    } else {
        res.image = ImageGrid(n, fov);
    }

    ImageGrid& x = res.image;
    std::vector<double> grad;
    double f = value_and_gradient(x, sino, rays, opts.beta, grad);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(grad.size());
    std::vector<double> x_trial(grad.size());
    std::vector<double> grad_new;

    const double c1 = 1e-4;
    bool line_search_ok = true;

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const double gnorm = norm2(grad);
        res.grad_norm = gnorm;
        if (gnorm <= opts.grad_tol * (1.0 + std::abs(f))) {
            res.converged = true;
            break;
        }

        // two-loop recursion for the quasi-Newton direction
        dir = grad;
        std::vector<double> alpha_coef(s_hist.size());
        for (std::size_t h = s_hist.size(); h-- > 0;) {
            alpha_coef[h] = rho_hist[h] * dot(s_hist[h], dir);
            axpy(-alpha_coef[h], y_hist[h], dir);
        }
        double gamma = 1.0;
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            gamma = dot(s, y) / dot(y, y);
        } else {
            gamma = 1.0 / std::max(gnorm, 1e-12);
        }
        for (double& v : dir) v *= gamma;
        for (std::size_t h = 0; h < s_hist.size(); ++h) {
            const double beta_coef = rho_hist[h] * dot(y_hist[h], dir);
            axpy(alpha_coef[h] - beta_coef, s_hist[h], dir);
        }
        for (double& v : dir) v = -v; // descent direction

        double slope = dot(grad, dir);
        if (slope >= 0.0) { // not a descent direction: restart from steepest
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t i = 0; i < dir.size(); ++i)
                dir[i] = -grad[i] / std::max(gnorm, 1e-12);
            slope = dot(grad, dir);
        }

        // backtracking line search with the sufficient-decrease condition
        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < x_trial.size(); ++i)
                x_trial[i] = x.values[i] + step * dir[i];
            ImageGrid xt(n, fov);
            xt.values = x_trial;
            f_new = value_only(xt, sino, rays, opts.beta);
            if (std::isfinite(f_new) && f_new <= f + c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            line_search_ok = false;
            break;
        }

        std::vector<double> s(dir.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = step * dir[i];
        for (std::size_t i = 0; i < s.size(); ++i) x.values[i] += s[i];
        const double f_prev = f;
        f = f_new;
        (void)f_prev;

        value_and_gradient(x, sino, rays, opts.beta, grad_new);
        std::vector<double> y(grad.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = grad_new[i] - grad[i];
        const double sy = dot(s, y);
        if (sy > 1e-10 * norm2(s) * norm2(y)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        grad.swap(grad_new);
    }

    res.iterations = it;
    res.objective = f;
    res.grad_norm = norm2(grad);
    if (!line_search_ok) res.converged = false;
    return res;
}

MapResult map_reconstruct(const Sinogram& sino, const ScannerConfig& cfg,
                          const GeometryParams& g, int n, double fov,
                          const CauchyMapOptions& opts, FilterSpec filter) {
    CauchyMapOptions local = opts;
    if (local.init == MapInit::Fbp && !local.init_image) {
        ImageGrid init = fbp_reconstruct(sino, cfg, g, n, fov, filter);
        for (double& v : init.values) v = std::max(v, 0.0);
        local.init_image = std::move(init);
    }
    const RaySet rays = ray_set(cfg, g);
    return map_reconstruct(sino, rays, n, fov, local);
}

} // namespace fanbeam
