#include "fanbeam/calib.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fanbeam/parallel.hpp"
#include "fbp_internal.hpp"

namespace fanbeam {

namespace {

// splitmix64; counter-based streams keyed by (seed, generation, candidate)
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t s) : state(s) {}
    Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : state(mix(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ a) ^ b)) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state = mix(state);
        return state;
    }

    double uniform() { // in [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    int below(int n) { return static_cast<int>(uniform() * n); }
};

constexpr std::uint64_t kInitStream = 0xC0FFEE;

} // namespace

void DeOptions::validate() const {
    if (pop_size < 4) throw std::invalid_argument("DeOptions: pop_size >= 4 required");
    if (mutation < 0.0 || mutation > 2.0)
        throw std::invalid_argument("DeOptions: mutation must be in [0, 2]");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw std::invalid_argument("DeOptions: crossover_prob must be in [0, 1]");
    if (max_gen < 1) throw std::invalid_argument("DeOptions: max_gen >= 1 required");
    if (conv_tol < 0.0) throw std::invalid_argument("DeOptions: conv_tol must be >= 0");
    if (bounds.empty()) throw std::invalid_argument("DeOptions: bounds required");
    for (const auto& b : bounds)
        if (!(b[0] < b[1]))
            throw std::invalid_argument("DeOptions: each bound needs low < high");
}

DeReport de_minimize(const std::function<double(const std::vector<double>&)>& f,
                     const DeOptions& opts) {
    opts.validate();
    const int dim = static_cast<int>(opts.bounds.size());
    const int np = opts.pop_size;

    std::vector<std::vector<double>> pop(static_cast<std::size_t>(np),
                                         std::vector<double>(static_cast<std::size_t>(dim)));

    // Latin hypercube initialization: one sample per stratum per dimension,
    // stratum order shuffled independently per dimension.
    for (int j = 0; j < dim; ++j) {
        Rng rng(opts.seed, kInitStream, static_cast<std::uint64_t>(j));
        std::vector<int> strata(static_cast<std::size_t>(np));
        std::iota(strata.begin(), strata.end(), 0);
        for (int i = np - 1; i > 0; --i)
            std::swap(strata[static_cast<std::size_t>(i)],
                      strata[static_cast<std::size_t>(rng.below(i + 1))]);
        const double lo = opts.bounds[static_cast<std::size_t>(j)][0];
        const double hi = opts.bounds[static_cast<std::size_t>(j)][1];
        for (int i = 0; i < np; ++i) {
            const double u =
                (strata[static_cast<std::size_t>(i)] + rng.uniform()) / np;
            pop[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                lo + u * (hi - lo);
        }
    }

    std::vector<double> fitness(static_cast<std::size_t>(np));
    parallel_for(0, np, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            fitness[static_cast<std::size_t>(i)] = f(pop[static_cast<std::size_t>(i)]);
    });

    DeReport report;
    report.seed = opts.seed;

    auto best_index = [&] {
        int bi = 0;
        for (int i = 1; i < np; ++i)
            if (fitness[static_cast<std::size_t>(i)] < fitness[static_cast<std::size_t>(bi)])
                bi = i;
        return bi;
    };
    auto record_trace = [&] {
        report.trace.push_back(fitness[static_cast<std::size_t>(best_index())]);
    };
    record_trace();

    std::vector<std::vector<double>> trials(static_cast<std::size_t>(np),
                                            std::vector<double>(static_cast<std::size_t>(dim)));
    std::vector<double> trial_fitness(static_cast<std::size_t>(np));

    int gen = 0;
    for (gen = 1; gen <= opts.max_gen; ++gen) {
        const int best = best_index();

        for (int i = 0; i < np; ++i) {
            Rng rng(opts.seed, static_cast<std::uint64_t>(gen),
                    static_cast<std::uint64_t>(i));
            int k1 = rng.below(np);
            while (k1 == best) k1 = rng.below(np);
            int k2 = rng.below(np);
            while (k2 == best || k2 == k1) k2 = rng.below(np);

            std::vector<double>& u = trials[static_cast<std::size_t>(i)];
            for (int j = 0; j < dim; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                double m = pop[static_cast<std::size_t>(best)][ju] +
                           opts.mutation * (pop[static_cast<std::size_t>(k1)][ju] -
                                            pop[static_cast<std::size_t>(k2)][ju]);
                m = std::clamp(m, opts.bounds[ju][0], opts.bounds[ju][1]);
                const bool take_mutant =
                    (j == dim - 1) || rng.uniform() < opts.crossover_prob;
                u[ju] = take_mutant ? m : pop[static_cast<std::size_t>(i)][ju];
            }
        }

        parallel_for(0, np, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t i = lo; i < hi; ++i)
                trial_fitness[static_cast<std::size_t>(i)] =
                    f(trials[static_cast<std::size_t>(i)]);
        });

        for (int i = 0; i < np; ++i) {
            if (trial_fitness[static_cast<std::size_t>(i)] <=
                fitness[static_cast<std::size_t>(i)]) {
                pop[static_cast<std::size_t>(i)] = trials[static_cast<std::size_t>(i)];
                fitness[static_cast<std::size_t>(i)] =
                    trial_fitness[static_cast<std::size_t>(i)];
            }
        }
        record_trace();

        double mean = 0.0;
        for (double v : fitness) mean += v;
        mean /= np;
        double var = 0.0;
        for (double v : fitness) var += (v - mean) * (v - mean);
        var /= np;
        if (std::sqrt(var) <= opts.conv_tol * std::abs(mean)) break;
    }

    report.generations = std::min(gen, opts.max_gen);
    const int bi = best_index();
    report.best = pop[static_cast<std::size_t>(bi)];
    report.best_value = fitness[static_cast<std::size_t>(bi)];
    return report;
}

CalibProblem make_calib_problem(Sinogram sino, ImageGrid ref, ScannerConfig cfg,
                                double fov, FilterSpec filter) {
    cfg.validate();
    ref.validate();
    filter.validate();
    if (sino.k != cfg.n_angles || sino.m != cfg.det_count)
        throw std::invalid_argument("make_calib_problem: sinogram dims do not match config");

    CalibProblem prob;
    prob.ref_mirror = mirror_image(ref);
    prob.recon_n = ref.n;
    prob.fov = fov;
    prob.filter = filter;
    prob.cfg = cfg;

    prob.support.reserve(1024);
    for (int r = 0; r < ref.n; ++r) {
        for (int c = 0; c < ref.n; ++c) {
            const double rv = ref.at(r, c);
            const double mv = prob.ref_mirror.at(r, c);
            if (rv == 0.0 && mv == 0.0) continue;
            const Vec2 p = ref.pixel_center(r, c);
            prob.support.push_back({p.x, p.y, rv, mv});
        }
    }
    prob.ref = std::move(ref);
    prob.sino = std::move(sino);
    return prob;
}

CorrelationPair correlation_with_references(const ImageGrid& recon,
                                            const ImageGrid& ref,
                                            const ImageGrid& ref_mirror) {
    if (recon.n != ref.n || recon.n != ref_mirror.n)
        throw std::invalid_argument("correlation_with_references: dim mismatch");
    CorrelationPair out;
    for (std::size_t i = 0; i < recon.values.size(); ++i) {
        out.with_ref += ref.values[i] * recon.values[i];
        out.with_mirror += ref_mirror.values[i] * recon.values[i];
    }
    return out;
}

namespace {

// Correlations of the FBP reconstruction with both handednesses, evaluated
// only on the reference support (identical values, far less work than a full
// reconstruction).
CorrelationPair masked_fbp_correlations(const GeometryParams& theta,
                                        const CalibProblem& prob) {
    const Sinogram q = detail::filtered_rows_for_backprojection(prob.sino, prob.cfg,
                                                                theta, prob.filter);
    const detail::FanWeights w = detail::fan_weights(prob.cfg, theta);
    const double inv_pixel = 1.0 / prob.cfg.det_pixel;
    const double half_m = 0.5 * (prob.sino.m - 1);
    const double scale = 0.5 * prob.cfg.angular_span / prob.cfg.n_angles;

    double acc_ref = 0.0, acc_mirror = 0.0;
    for (std::size_t k = 0; k < w.frames.size(); ++k) {
        const detail::BpFrame& f = w.frames[k];
        const double* qrow = q.row(static_cast<int>(k));
        for (const CalibProblem::SupportPixel& sp : prob.support) {
            const double v = detail::backproject_sample(f, qrow, prob.sino.m,
                                                        inv_pixel, half_m,
                                                        {sp.x, sp.y});
            acc_ref += sp.ref_val * v;
            acc_mirror += sp.mirror_val * v;
        }
    }
    return {acc_ref * scale, acc_mirror * scale};
}

} // namespace

double objective_J(const GeometryParams& theta, const CalibProblem& prob) {
    if (!(theta.det_radius > 0.0) || !std::isfinite(theta.first_angle) ||
        !std::isfinite(theta.source_shift) || !std::isfinite(theta.det_shift) ||
        !std::isfinite(theta.det_tilt))
        return 0.0; // degenerate geometry: no correlation
    const CorrelationPair c = masked_fbp_correlations(theta, prob);
    const double m = std::max(c.with_ref, c.with_mirror);
    return std::isfinite(m) ? -m : 0.0;
}

double objective_J_sino(const GeometryParams& theta, const CalibProblem& prob) {
    if (!(theta.det_radius > 0.0)) return 0.0;
    const RaySet rays = ray_set(prob.cfg, theta);
    const Sinogram a_ref = forward_project(prob.ref, rays);
    const Sinogram a_mirror = forward_project(prob.ref_mirror, rays);
    double dot_ref = 0.0, dot_mirror = 0.0;
    for (std::size_t i = 0; i < prob.sino.values.size(); ++i) {
        dot_ref += a_ref.values[i] * prob.sino.values[i];
        dot_mirror += a_mirror.values[i] * prob.sino.values[i];
    }
    const double m = std::max(dot_ref, dot_mirror);
    return std::isfinite(m) ? -m : 0.0;
}

GeometryParams theta_from_vector(const std::vector<double>& x) {
    if (x.size() != 5)
        throw std::invalid_argument("theta_from_vector: 5 components required");
    GeometryParams g;
    g.first_angle = x[0];
    g.det_radius = x[1];
    g.source_shift = x[2];
    g.det_shift = x[3];
    g.det_tilt = x[4];
    return g;
}

std::vector<double> theta_to_vector(const GeometryParams& g) {
    return {g.first_angle, g.det_radius, g.source_shift, g.det_shift, g.det_tilt};
}

std::vector<std::array<double, 2>> default_calibration_bounds() {
    return {{0.0, 2.0 * M_PI}, {400.0, 1000.0}, {-500.0, 500.0},
            {-500.0, 500.0},   {-0.6, 0.6}};
}

OptimizerReport calibrate(const CalibProblem& prob, const DeOptions& opts) {
    DeOptions local = opts;
    if (local.bounds.empty()) local.bounds = default_calibration_bounds();
    if (local.bounds.size() != 5)
        throw std::invalid_argument("calibrate: bounds must have 5 dimensions");

    const DeReport de = de_minimize(
        [&](const std::vector<double>& x) {
            return objective_J(theta_from_vector(x), prob);
        },
        local);

    OptimizerReport report;
    report.best_theta = theta_from_vector(de.best);
    report.best_value = de.best_value;
    report.trace = de.trace;
    report.generations = de.generations;
    report.seed = de.seed;
    const CorrelationPair c = masked_fbp_correlations(report.best_theta, prob);
    report.mirrored = c.with_mirror > c.with_ref;
    return report;
}

} // namespace fanbeam
