#pragma once

// Energy-growth analysis for conformal curves: ball and sphere averages of
// ||DF||^p, the derivative identity h'(r) = (n/r)(sphere - ball), the
// isoperimetric gap, modulus-of-continuity and Caccioppoli ratios,
// subharmonicity of rho, the calibrated mass lower bound, and the
// affine-vs-super-Euclidean dichotomy classifier.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "confcurve/curve.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/sampling.hpp"

namespace confcurve {

// ---------------------------------------------------------------------------
// Averages
// ---------------------------------------------------------------------------

/// Monte-Carlo average of ||DF||^p over the uniform measure on B_r(x0).
inline McValue ball_average(const CurveModel& model, const Vec& x0, double r, int p,
                            long long n_samples, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_average: radius must be positive");
    BallPairSampler gen{x0, r};
    return mc_antithetic(n_samples, seed, model.domain_dim(), gen,
                         [&](const Vec& x) { return ipow(opnorm(jacobian(model, x)), p); });
}

/// Monte-Carlo average of ||DF||^p over the uniform measure on the sphere
/// of radius r about x0 (Gaussian direction sampling).
inline McValue sphere_average(const CurveModel& model, const Vec& x0, double r, int p,
                              long long n_samples, std::uint64_t seed) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_average: radius must be positive");
    SpherePairSampler gen{x0, r};
    return mc_antithetic(n_samples, seed, model.domain_dim(), gen,
                         [&](const Vec& x) { return ipow(opnorm(jacobian(model, x)), p); });
}

/// h'(r) = (n/r) (sphere average - ball average) of ||DF||^n, with the two
/// averages on independent sub-streams and the errors combined in
/// quadrature. Nonnegative (within noise) for conformal omega-curves.
inline McValue h_prime(const CurveModel& model, const Vec& x0, double r, long long n_samples,
                       std::uint64_t seed) {
    const int n = model.domain_dim();
    const McValue sph = sphere_average(model, x0, r, n, n_samples, mix_seed(seed, 1));
    const McValue ball = ball_average(model, x0, r, n, n_samples, mix_seed(seed, 2));
    const double scale = static_cast<double>(n) / r;
    return McValue{scale * (sph.value - ball.value),
                   scale * std::sqrt(sph.std_error * sph.std_error +
                                     ball.std_error * ball.std_error)};
}

/// (sphere average of ||DF||^{n-1})^{n/(n-1)} - (ball average of ||DF||^n).
/// Nonnegative for conformal omega-curves; identically zero characterizes
/// the affine / Moebius rigidity case.
inline McValue isoperimetric_gap(const CurveModel& model, const Vec& x0, double r,
                                 long long n_samples, std::uint64_t seed) {
    const int n = model.domain_dim();
    if (n < 2) throw std::invalid_argument("isoperimetric_gap: domain dimension must be >= 2");
    const McValue sph = sphere_average(model, x0, r, n - 1, n_samples, mix_seed(seed, 1));
    const McValue ball = ball_average(model, x0, r, n, n_samples, mix_seed(seed, 2));
    const double expo = static_cast<double>(n) / (n - 1);
    const double lhs = std::pow(sph.value, expo);
    // first-order error propagation through x -> x^{n/(n-1)}
    const double dlhs =
        sph.value > 0.0 ? expo * std::pow(sph.value, expo - 1.0) * sph.std_error : 0.0;
    return McValue{lhs - ball.value,
                   std::sqrt(dlhs * dlhs + ball.std_error * ball.std_error)};
}

// ---------------------------------------------------------------------------
// Modulus of continuity and Caccioppoli
// ---------------------------------------------------------------------------

/// Empirical modulus-of-continuity constant: the max over sampled pairs
/// x, y in B_r(x0) of |F(x) - F(y)| / (|x - y| (ball avg over B_2r)^{1/n}).
/// For a fixed curve this is bounded uniformly in r.
inline double modulus_constant(const CurveModel& model, const Vec& x0, double r, int pairs,
                               long long n_samples, std::uint64_t seed) {
    const int n = model.domain_dim();
    const McValue energy = ball_average(model, x0, 2.0 * r, n, n_samples, mix_seed(seed, 1));
    const double denom_energy = std::pow(energy.value, 1.0 / n);
    RandomStream rs(mix_seed(seed, 2));
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        Vec gx = rs.gaussian_vec(n), gy = rs.gaussian_vec(n);
        const double rx = r * std::pow(rs.uniform01(), 1.0 / n) / norm2(gx);
        const double ry = r * std::pow(rs.uniform01(), 1.0 / n) / norm2(gy);
        Vec x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = x0[i] + rx * gx[i];
            y[i] = x0[i] + ry * gy[i];
        }
        const double gap = dist2(x, y);
        if (gap < 1e-12 * r) continue;  // degenerate pair
        const double image_gap = dist2(eval(model, x), eval(model, y));
        worst = std::max(worst, image_gap / (gap * denom_energy));
    }
    return worst;
}

struct CaccioppoliRatio {
    double ratio = 0.0;
    double diameter = 0.0;
    bool defined = false;  // false for (numerically) constant maps
};

/// (ball avg over B_r of ||DF||^n)^{1/n} / (diam F(B_2r) / 2r), the
/// Caccioppoli quotient; diameter estimated from sampled images including
/// antipodal pairs.
inline CaccioppoliRatio caccioppoli_ratio(const CurveModel& model, const Vec& x0, double r,
                                          long long n_samples, std::uint64_t seed,
                                          int diameter_points = 2048) {
    const int n = model.domain_dim();
    const McValue energy = ball_average(model, x0, r, n, n_samples, mix_seed(seed, 1));

    std::vector<Vec> images;
    images.reserve(2 * diameter_points);
    RandomStream rs(mix_seed(seed, 2));
    for (int k = 0; k < diameter_points; ++k) {
        Vec g = rs.gaussian_vec(n);
        const double rho = 2.0 * r * std::pow(rs.uniform01(), 1.0 / n) / norm2(g);
        Vec x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = x0[i] + rho * g[i];
            y[i] = x0[i] - rho * g[i];
        }
        images.push_back(eval(model, x));
        images.push_back(eval(model, y));
    }
    double diam = 0.0;
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t j = i + 1; j < images.size(); ++j)
            diam = std::max(diam, dist2(images[i], images[j]));

    CaccioppoliRatio out;
    out.diameter = diam;
    if (diam < 1e-14 * (1.0 + r)) return out;  // constant map: flagged undefined
    out.defined = true;
    out.ratio = std::pow(energy.value, 1.0 / n) / (diam / (2.0 * r));
    return out;
}

// ---------------------------------------------------------------------------
// Subharmonicity
// ---------------------------------------------------------------------------

/// Minimum over lattice nodes in the annulus {inner <= |x - center| <= outer}
/// of the (2n+1)-point Laplacian of rho, where rho = ||DF||^{(n-2)/2} for
/// n >= 3 and rho = log ||DF|| for n = 2. Nodes sit on a lattice of pitch
/// `node_pitch` (default: stencil_h); keeping the pitch fixed while halving
/// stencil_h gives a clean Richardson order-of-convergence comparison on a
/// common node set. Stencil points must stay inside the annulus and away
/// from the zero set of ||DF||.
inline double subharmonicity_min(const CurveModel& model, const Vec& center, double inner_radius,
                                 double outer_radius, double stencil_h, double node_pitch = 0.0,
                                 double min_opnorm = 1e-8) {
    const int n = model.domain_dim();
    if (!(stencil_h > 0.0)) throw std::invalid_argument("subharmonicity_min: bad stencil step");
    if (node_pitch <= 0.0) node_pitch = stencil_h;

    const auto rho = [&](const Vec& x) {
        const double s = opnorm(jacobian(model, x));
        if (s < min_opnorm)
            throw std::runtime_error("subharmonicity_min: ||DF|| below margin at a stencil node");
        if (n == 2) return std::log(s);
        return std::pow(s, 0.5 * (n - 2));
    };

    const long side = std::lround(std::floor(outer_radius / node_pitch));
    std::vector<long> idx(n, -side);
    double min_lap = std::numeric_limits<double>::infinity();
    bool any = false;
    Vec x(n), xs(n);
    for (;;) {
        double rad2 = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = center[i] + static_cast<double>(idx[i]) * node_pitch;
            const double d = x[i] - center[i];
            rad2 += d * d;
        }
        const double rad = std::sqrt(rad2);
        // the whole stencil must stay inside the annulus
        if (rad - stencil_h >= inner_radius && rad + stencil_h <= outer_radius) {
            any = true;
            double lap = -2.0 * n * rho(x);
            for (int i = 0; i < n; ++i) {
                xs = x;
                xs[i] = x[i] + stencil_h;
                lap += rho(xs);
                xs[i] = x[i] - stencil_h;
                lap += rho(xs);
            }
            lap /= stencil_h * stencil_h;
            min_lap = std::min(min_lap, lap);
        }
        int pos = 0;
        while (pos < n && ++idx[pos] > side) idx[pos++] = -side;
        if (pos == n) break;
    }
    if (!any) throw std::invalid_argument("subharmonicity_min: no interior lattice nodes");
    return min_lap;
}

// ---------------------------------------------------------------------------
// Calibrated mass lower bound
// ---------------------------------------------------------------------------

struct MassRatio {
    double ratio = 0.0;
    double std_error = 0.0;
    bool proper_on_shell = false;  // preimage of the target ball stayed inside B_R
};

/// integral of ||DF||^n over F^{-1}(B_r(F(x0))) cap B_R(x0), divided by
/// omega_n r^n. The monotonicity formula for the pushforward cycle makes
/// this >= 1 for conformal omega-curves; equality characterizes affine
/// images. Properness on the truncation shell is checked by sampling
/// |x - x0| = R.
inline MassRatio mass_ratio(const CurveModel& model, const Vec& x0, double r,
                            double truncation_radius, long long n_samples, std::uint64_t seed,
                            int shell_directions = 4096) {
    const int n = model.domain_dim();
    if (!(r > 0.0) || !(truncation_radius > 0.0))
        throw std::invalid_argument("mass_ratio: radii must be positive");
    const Vec fx0 = eval(model, x0);

    BallPairSampler gen{x0, truncation_radius};
    const McValue mean = mc_antithetic(
        n_samples, mix_seed(seed, 1), n, gen, [&](const Vec& x) {
            if (dist2(eval(model, x), fx0) >= r) return 0.0;
            return ipow(opnorm(jacobian(model, x)), n);
        });
    // vol(B_R) / (omega_n r^n) = (R/r)^n
    const double scale = ipow(truncation_radius / r, n);

    MassRatio out;
    out.ratio = mean.value * scale;
    out.std_error = mean.std_error * scale;
    out.proper_on_shell = true;
    // the relative slack keeps boundary-touching preimages (|F - F(x0)| = r
    // exactly on the shell) from tripping the flag at rounding level
    const double shell_gate = r * (1.0 - 1e-9);
    for (const Vec& u : sample_directions(n, shell_directions, mix_seed(seed, 2))) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = x0[i] + truncation_radius * u[i];
        if (dist2(eval(model, x), fx0) < shell_gate) {
            out.proper_on_shell = false;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Profiles and the dichotomy classifier
// ---------------------------------------------------------------------------

struct RadiiGrid {
    double start = 1.0;
    double factor = 2.0;
    int count = 5;

    std::vector<double> values() const {
        if (!(start > 0.0) || !(factor > 1.0) || count < 2)
            throw std::invalid_argument("RadiiGrid: need start > 0, factor > 1, count >= 2");
        std::vector<double> r(count);
        r[0] = start;
        for (int i = 1; i < count; ++i) r[i] = r[i - 1] * factor;
        return r;
    }

    /// "<start>x<factor>x<count>", e.g. "1x2x5".
    static RadiiGrid parse(const std::string& text) {
        RadiiGrid g;
        size_t used = 0;
        g.start = std::stod(text, &used);
        if (used >= text.size() || text[used] != 'x')
            throw std::invalid_argument("RadiiGrid: expected <start>x<factor>x<count>");
        size_t used2 = 0;
        g.factor = std::stod(text.substr(used + 1), &used2);
        used += 1 + used2;
        if (used >= text.size() || text[used] != 'x')
            throw std::invalid_argument("RadiiGrid: expected <start>x<factor>x<count>");
        g.count = std::stoi(text.substr(used + 1));
        return g;
    }
};

struct EnergyProfile {
    Vec center;
    std::vector<double> radii;
    std::vector<double> h, h_se;                    // ball average of ||DF||^n
    std::vector<double> sphere_n, sphere_n_se;      // sphere average, p = n
    std::vector<double> sphere_nm1, sphere_nm1_se;  // sphere average, p = n-1
    long long samples_per_radius = 0;
    std::uint64_t seed = 0;
};

/// Ball and sphere averages over a radii grid, one sub-seed per
/// (radius, quantity) pair so entries are independent and reproducible.
inline EnergyProfile compute_profile(const CurveModel& model, const Vec& x0,
                                     const std::vector<double>& radii, long long n_samples,
                                     std::uint64_t seed) {
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("compute_profile: radii must be strictly increasing");
    if (radii.empty() || !(radii.front() > 0.0))
        throw std::invalid_argument("compute_profile: radii must be positive");
    const int n = model.domain_dim();
    EnergyProfile p;
    p.center = x0;
    p.radii = radii;
    p.samples_per_radius = n_samples;
    p.seed = seed;
    for (size_t i = 0; i < radii.size(); ++i) {
        const std::uint64_t base = mix_seed(seed, 3 * i);
        const McValue h = ball_average(model, x0, radii[i], n, n_samples, base);
        const McValue sn = sphere_average(model, x0, radii[i], n, n_samples, mix_seed(seed, 3 * i + 1));
        const McValue sm = sphere_average(model, x0, radii[i], n - 1, n_samples, mix_seed(seed, 3 * i + 2));
        p.h.push_back(h.value);
        p.h_se.push_back(h.std_error);
        p.sphere_n.push_back(sn.value);
        p.sphere_n_se.push_back(sn.std_error);
        p.sphere_nm1.push_back(sm.value);
        p.sphere_nm1_se.push_back(sm.std_error);
    }
    return p;
}

enum class GrowthLabel { AffineBounded, SuperEuclidean, Inconclusive };

inline const char* to_string(GrowthLabel l) {
    switch (l) {
        case GrowthLabel::AffineBounded:
            return "AffineBounded";
        case GrowthLabel::SuperEuclidean:
            return "SuperEuclidean";
        default:
            return "Inconclusive";
    }
}

struct GrowthVerdict {
    GrowthLabel label = GrowthLabel::Inconclusive;
    std::vector<double> doubling_ratios;  // h(2R)/h(R) over grid pairs
    double top_doubling_ratio = 0.0;
    double monotonicity_margin_sigmas = 0.0;  // min of (h_{i+1}-h_i)/combined se
    double affinity_residual = 0.0;           // sup gap to the best affine fit
    double delta = 0.0;
    double affine_tol = 0.0;
};

struct ClassifyOptions {
    double delta = 0.05;       // doubling-ratio margin
    double affine_tol = 1e-6;  // sup-deviation gate for the affine label
    int fit_samples = 256;
    std::uint64_t seed = 0;
};

struct AffineFit {
    AffineMap map;
    double sup_residual = 0.0;
};

/// Least-squares affine fit to F on sampled points of B_radius(x0), with the
/// sup deviation over the sample.
inline AffineFit fit_affine(const CurveModel& model, const Vec& x0, double radius, int count,
                            std::uint64_t seed) {
    const int n = model.domain_dim(), m = model.target_dim();
    if (count < n + 1) throw std::invalid_argument("fit_affine: too few sample points");
    const std::vector<Vec> pts = sample_ball_points(x0, radius, count, seed);

    // normal equations over the design (x, 1)
    Mat gram(n + 1, n + 1);
    std::vector<Vec> rhs(m, Vec(n + 1, 0.0));
    std::vector<Vec> values;
    values.reserve(count);
    for (const Vec& x : pts) {
        Vec d(n + 1);
        for (int i = 0; i < n; ++i) d[i] = x[i];
        d[n] = 1.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) gram(i, j) += d[i] * d[j];
        const Vec fx = eval(model, x);
        for (int c = 0; c < m; ++c)
            for (int i = 0; i <= n; ++i) rhs[c][i] += d[i] * fx[c];
        values.push_back(fx);
    }
    Mat a(m, n);
    Vec b(m);
    for (int c = 0; c < m; ++c) {
        const Vec sol = solve(gram, rhs[c]);
        for (int j = 0; j < n; ++j) a(c, j) = sol[j];
        b[c] = sol[n];
    }
    AffineFit fit{AffineMap(std::move(a), std::move(b)), 0.0};
    for (size_t k = 0; k < pts.size(); ++k)
        fit.sup_residual = std::max(fit.sup_residual, dist2(values[k], fit.map.apply(pts[k])));
    return fit;
}

/// Theorem-driven trichotomy at finite scale: super-Euclidean growth when the
/// top-scale doubling ratio exceeds 1 + delta, affine when all doubling
/// ratios are small AND the curve is affine to tolerance on the reference
/// ball. Anything else is Inconclusive, which for a verified conformal curve
/// at tight tolerances contradicts the dichotomy and is a red-flag finding.
inline GrowthVerdict classify_growth(const EnergyProfile& profile, const CurveModel& model,
                                     const ClassifyOptions& opts = {}) {
    const std::vector<double>& r = profile.radii;
    if (r.size() < 2 || !(r.back() >= 8.0 * r.front() * (1.0 - 1e-12)))
        throw std::invalid_argument("classify_growth: profile too short (need 3 doublings)");

    GrowthVerdict v;
    v.delta = opts.delta;
    v.affine_tol = opts.affine_tol;

    int top_pair = -1;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = i + 1; j < r.size(); ++j)
            if (std::abs(r[j] - 2.0 * r[i]) <= 1e-9 * r[i]) {
                v.doubling_ratios.push_back(profile.h[j] / profile.h[i]);
                top_pair = static_cast<int>(v.doubling_ratios.size()) - 1;
            }
    if (v.doubling_ratios.size() < 3)
        throw std::invalid_argument("classify_growth: grid has fewer than 3 doubling pairs");
    v.top_doubling_ratio = v.doubling_ratios[top_pair];

    constexpr double kExactMargin = 1e12;
    v.monotonicity_margin_sigmas = kExactMargin;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        const double diff = profile.h[i + 1] - profile.h[i];
        const double se = std::sqrt(profile.h_se[i + 1] * profile.h_se[i + 1] +
                                    profile.h_se[i] * profile.h_se[i]);
        const double margin = se > 0.0 ? diff / se : (diff >= 0.0 ? kExactMargin : -kExactMargin);
        v.monotonicity_margin_sigmas = std::min(v.monotonicity_margin_sigmas, margin);
    }

    v.affinity_residual =
        fit_affine(model, profile.center, r.front(), opts.fit_samples, mix_seed(opts.seed, 17))
            .sup_residual;

    bool all_small = true;
    for (double q : v.doubling_ratios)
        if (q > 1.0 + opts.delta) all_small = false;

    if (v.top_doubling_ratio >= 1.0 + opts.delta)
        v.label = GrowthLabel::SuperEuclidean;
    else if (all_small && v.affinity_residual <= opts.affine_tol)
        v.label = GrowthLabel::AffineBounded;
    else
        v.label = GrowthLabel::Inconclusive;
    return v;
}

}  // namespace confcurve
