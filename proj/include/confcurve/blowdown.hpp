#pragma once

// Blow-down rescalings F_r(x) = (F(y + r x) - F(y)) / r, best-fit linear
// isometries by orthogonal (Procrustes) alignment, and the properness radii
// s_r, S_r sandwiching the preimage of a target ball.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "confcurve/curve.hpp"
#include "confcurve/growth.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/sampling.hpp"

namespace confcurve {

/// The rescaled model x -> (F(y + r x) - F(y)) / r, built by exact affine
/// pre/post composition. Its ball average of ||DF||^n over B_1(0) equals
/// h(r) of the original at center y.
inline CurveModel rescale(const CurveModel& model, const Vec& y, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("rescale: scale must be positive");
    const int n = model.domain_dim(), m = model.target_dim();
    Mat pre_a = Mat::identity(n);
    for (int i = 0; i < n; ++i) pre_a(i, i) = r;
    const Vec fy = eval(model, y);
    Mat post_a = Mat::identity(m);
    Vec post_b(m);
    for (int i = 0; i < m; ++i) {
        post_a(i, i) = 1.0 / r;
        post_b[i] = -fy[i] / r;
    }
    return composite_model(AffineMap(std::move(pre_a), y), model,
                           AffineMap(std::move(post_a), std::move(post_b)));
}

struct IsometryFit {
    double deviation = 0.0;  // sup over the sample of |F(x) - G x|
    Mat map;                 // m x n, orthonormal columns
};

/// Best-fit linear isometry by orthogonal alignment: the polar factor of the
/// cross-covariance of values against sample points, projected to
/// orthonormal-column maps (orientation-preserving branch for m = n).
inline IsometryFit isometry_deviation(const CurveModel& model, const std::vector<Vec>& points) {
    const int n = model.domain_dim(), m = model.target_dim();
    if (static_cast<int>(points.size()) < n)
        throw std::invalid_argument("isometry_deviation: fewer points than domain dimension");

    Mat x(static_cast<int>(points.size()), n);
    Mat y(static_cast<int>(points.size()), m);
    for (size_t k = 0; k < points.size(); ++k) {
        const Vec fx = eval(model, points[k]);
        for (int j = 0; j < n; ++j) x(static_cast<int>(k), j) = points[k][j];
        for (int j = 0; j < m; ++j) y(static_cast<int>(k), j) = fx[j];
    }
    {
        const ThinSvd sx = thin_svd(x);
        if (sx.sigma.back() < 1e-10 * std::max(sx.sigma.front(), 1.0))
            throw std::invalid_argument("isometry_deviation: sample does not span the domain");
    }

    Mat cross = matmul(transpose(y), x);  // m x n
    ThinSvd svd = thin_svd(cross);
    Mat g = matmul(svd.u, transpose(svd.v));
    if (m == n && det(g) < 0.0) {
        // orientation-preserving branch: flip the least-significant direction
        int weakest = static_cast<int>(svd.sigma.size()) - 1;
        for (int i = 0; i < m; ++i) svd.u(i, weakest) = -svd.u(i, weakest);
        g = matmul(svd.u, transpose(svd.v));
    }

    IsometryFit fit;
    fit.map = std::move(g);
    for (size_t k = 0; k < points.size(); ++k) {
        double d2 = 0.0;
        for (int i = 0; i < m; ++i) {
            double gi = 0.0;
            for (int j = 0; j < n; ++j) gi += fit.map(i, j) * x(static_cast<int>(k), j);
            const double d = y(static_cast<int>(k), i) - gi;
            d2 += d * d;
        }
        fit.deviation = std::max(fit.deviation, std::sqrt(d2));
    }
    return fit;
}

struct BlowdownReport {
    Vec anchor;
    std::vector<double> scales;
    std::vector<double> deviations;     // per-scale sup gap to the best isometry
    std::vector<double> energies;       // ball average of ||D rescaled||^n over B_1
    std::vector<double> energy_se;
    std::vector<bool> hypothesis_ok;    // normalized-energy hypothesis |h - 1| <= tol
    Mat final_best_fit;
    std::uint64_t seed = 0;
};

/// Per-scale deviation-from-isometry diagnostics for the blow-down family.
/// Convergence of the deviations is only meaningful on models satisfying the
/// normalized-energy hypothesis; each scale carries that flag.
inline BlowdownReport blowdown_report(const CurveModel& model, const Vec& anchor,
                                      const std::vector<double>& scales, int fit_points,
                                      long long energy_samples, std::uint64_t seed,
                                      double hypothesis_tol = 0.05) {
    if (scales.empty()) throw std::invalid_argument("blowdown_report: no scales");
    BlowdownReport rep;
    rep.anchor = anchor;
    rep.scales = scales;
    rep.seed = seed;
    const int n = model.domain_dim();
    for (size_t k = 0; k < scales.size(); ++k) {
        const CurveModel resc = rescale(model, anchor, scales[k]);
        const std::vector<Vec> pts =
            sample_ball_points(Vec(n, 0.0), 1.0, fit_points, mix_seed(seed, 2 * k));
        const IsometryFit fit = isometry_deviation(resc, pts);
        const McValue energy =
            ball_average(resc, Vec(n, 0.0), 1.0, n, energy_samples, mix_seed(seed, 2 * k + 1));
        rep.deviations.push_back(fit.deviation);
        rep.energies.push_back(energy.value);
        rep.energy_se.push_back(energy.std_error);
        rep.hypothesis_ok.push_back(std::abs(energy.value - 1.0) <=
                                    hypothesis_tol + 3.0 * energy.std_error);
        if (k + 1 == scales.size()) rep.final_best_fit = fit.map;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Properness radii
// ---------------------------------------------------------------------------

struct PropernessSearch {
    double resolution = 1e-3;
    double max_radius = 64.0;
    int directions = 10000;
    int refine_steps = 3;
};

struct PropernessRadii {
    double r = 0.0;
    double s_r = 0.0;  // maximal inner radius
    double S_r = 0.0;  // minimal outer radius
    bool s_capped = false;  // s_r hit the search cap (reported as >= cap)
    bool S_capped = false;  // S_r hit the search cap
    double resolution = 0.0;
};

namespace detail {

// sup or inf of |F(x) - F(x0)| over the sphere |x - x0| = s, from a shared
// direction set plus a few rounds of local refinement around the extremum.
inline double sphere_extreme(const CurveModel& model, const Vec& x0, const Vec& fx0, double s,
                             const std::vector<Vec>& dirs, bool maximize, int refine_steps,
                             std::uint64_t refine_seed) {
    const int n = model.domain_dim();
    Vec x(n);
    auto image_dist = [&](const Vec& u) {
        for (int i = 0; i < n; ++i) x[i] = x0[i] + s * u[i];
        return dist2(eval(model, x), fx0);
    };
    Vec best_dir = dirs.front();
    double best = image_dist(best_dir);
    for (const Vec& u : dirs) {
        const double v = image_dist(u);
        if (maximize ? v > best : v < best) {
            best = v;
            best_dir = u;
        }
    }
    RandomStream rs(refine_seed);
    double spread = 0.1;
    for (int step = 0; step < refine_steps; ++step) {
        for (int k = 0; k < 32; ++k) {
            Vec u(n);
            double nrm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                u[i] = best_dir[i] + spread * rs.gaussian();
                nrm2 += u[i] * u[i];
            }
            const double nrm = std::sqrt(nrm2);
            for (int i = 0; i < n; ++i) u[i] /= nrm;
            const double v = image_dist(u);
            if (maximize ? v > best : v < best) {
                best = v;
                best_dir = u;
            }
        }
        spread *= 0.2;
    }
    return best;
}

}  // namespace detail

/// Bracket s_r (largest s with sup_{|x-x0|=s} |F - F(x0)| < r) and S_r
/// (smallest S past which inf_{|x-x0|=S'} |F - F(x0)| >= r for all tested
/// S' up to the cap) by a coarse sweep plus bisection over sampled spheres.
/// The bisection width is reported as the certified resolution.
inline PropernessRadii properness_radii(const CurveModel& model, const Vec& x0, double r,
                                        const PropernessSearch& search, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("properness_radii: r must be positive");
    const int n = model.domain_dim();
    const Vec fx0 = eval(model, x0);
    const std::vector<Vec> dirs = sample_directions(n, search.directions, mix_seed(seed, 0));

    std::uint64_t refine_counter = 1;
    auto sup_at = [&](double s) {
        return detail::sphere_extreme(model, x0, fx0, s, dirs, true, search.refine_steps,
                                      mix_seed(seed, refine_counter++));
    };
    auto inf_at = [&](double s) {
        return detail::sphere_extreme(model, x0, fx0, s, dirs, false, search.refine_steps,
                                      mix_seed(seed, refine_counter++));
    };

    PropernessRadii out;
    out.r = r;
    out.resolution = search.resolution;

    constexpr int kSweep = 64;
    // s_r: prefix scan for the first sphere whose sup reaches r, then bisect.
    {
        double lo = 0.0, hi = -1.0;
        for (int k = 1; k <= kSweep; ++k) {
            const double s = search.max_radius * k / kSweep;
            if (sup_at(s) >= r) {
                hi = s;
                break;
            }
            lo = s;
        }
        if (hi < 0.0) {
            out.s_r = search.max_radius;
            out.s_capped = true;
        } else {
            while (hi - lo > search.resolution) {
                const double mid = 0.5 * (lo + hi);
                (sup_at(mid) < r ? lo : hi) = mid;
            }
            out.s_r = lo;
        }
    }
    // S_r: suffix scan for the last sphere whose inf is below r, then bisect.
    {
        double last_below = -1.0;
        double next_above = search.max_radius;
        bool above_seen = false;
        for (int k = kSweep; k >= 1; --k) {
            const double s = search.max_radius * k / kSweep;
            if (inf_at(s) < r) {
                last_below = s;
                break;
            }
            next_above = s;
            above_seen = true;
        }
        if (last_below < 0.0) {
            // below r nowhere on the sweep: the preimage is already inside
            // the first sweep sphere; bisect down from there.
            double lo = 0.0, hi = search.max_radius / kSweep;
            while (hi - lo > search.resolution) {
                const double mid = 0.5 * (lo + hi);
                (inf_at(mid) < r ? lo : hi) = mid;
            }
            out.S_r = hi;
        } else if (!above_seen) {
            out.S_r = search.max_radius;
            out.S_capped = true;
        } else {
            double lo = last_below, hi = next_above;
            while (hi - lo > search.resolution) {
                const double mid = 0.5 * (lo + hi);
                (inf_at(mid) < r ? lo : hi) = mid;
            }
            out.S_r = hi;
        }
    }
    return out;
}

}  // namespace confcurve
