#pragma once

// Seed-deterministic Monte Carlo: uniform ball / sphere / box sampling with
// antithetic pairs and streaming mean / standard-error accumulation. Samples
// are drawn in fixed-size batches with per-batch sub-seeds and merged in
// batch order, so results do not depend on how batches are scheduled.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "confcurve/linalg.hpp"
#include "confcurve/rng.hpp"

namespace confcurve {

struct McValue {
    double value = 0.0;
    double std_error = 0.0;
};

/// Volume of the unit ball in R^n, from the Gamma closed form.
inline double unit_ball_volume(int n) {
    return std::exp(0.5 * n * std::log(3.14159265358979323846) - std::lgamma(0.5 * n + 1.0));
}

namespace detail {

struct Welford {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    double std_error() const {
        if (count < 2) return 0.0;
        const double var = m2 / static_cast<double>(count - 1);
        return std::sqrt(var / static_cast<double>(count));
    }
};

constexpr int kMcBatchPairs = 8192;

}  // namespace detail

/// Antithetic-pair Monte Carlo. `gen(rs, x, y)` fills an antithetic point
/// pair; `f` is the integrand. `n_samples` counts points (two per pair).
template <class PairGen, class F>
McValue mc_antithetic(long long n_samples, std::uint64_t seed, int dim, PairGen&& gen, F&& f) {
    const long long pairs = (n_samples + 1) / 2;
    if (pairs < 1) throw std::invalid_argument("mc_antithetic: need at least one pair");
    detail::Welford acc;
    Vec x(dim), y(dim);
    long long done = 0;
    for (std::uint64_t batch = 0; done < pairs; ++batch) {
        RandomStream rs(mix_seed(seed, batch));
        const long long todo = std::min<long long>(detail::kMcBatchPairs, pairs - done);
        for (long long i = 0; i < todo; ++i) {
            gen(rs, x, y);
            acc.push(0.5 * (f(x) + f(y)));
        }
        done += todo;
    }
    return McValue{acc.mean, acc.std_error()};
}

/// Antithetic pair uniform in the ball B_r(center): radius r U^{1/n} along a
/// Gaussian direction and its reflection through the center.
struct BallPairSampler {
    Vec center;
    double radius;

    void operator()(RandomStream& rs, Vec& x, Vec& y) const {
        const int n = static_cast<int>(center.size());
        double nrm2 = 0.0;
        x.resize(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rs.gaussian();
            nrm2 += x[i] * x[i];
        }
        const double nrm = std::sqrt(nrm2);
        const double rho = radius * std::pow(rs.uniform01(), 1.0 / n);
        y.resize(n);
        for (int i = 0; i < n; ++i) {
            const double step = rho * (x[i] / nrm);
            x[i] = center[i] + step;
            y[i] = center[i] - step;
        }
    }
};

/// Antipodal pair uniform on the sphere of radius r about center.
struct SpherePairSampler {
    Vec center;
    double radius;

    void operator()(RandomStream& rs, Vec& x, Vec& y) const {
        const int n = static_cast<int>(center.size());
        double nrm2 = 0.0;
        x.resize(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rs.gaussian();
            nrm2 += x[i] * x[i];
        }
        const double nrm = std::sqrt(nrm2);
        y.resize(n);
        for (int i = 0; i < n; ++i) {
            const double step = radius * (x[i] / nrm);
            x[i] = center[i] + step;
            y[i] = center[i] - step;
        }
    }
};

/// Antithetic pair uniform in the axis box center +- halfwidth.
struct BoxPairSampler {
    Vec center;
    Vec halfwidth;

    void operator()(RandomStream& rs, Vec& x, Vec& y) const {
        const int n = static_cast<int>(center.size());
        x.resize(n);
        y.resize(n);
        for (int i = 0; i < n; ++i) {
            const double step = halfwidth[i] * (2.0 * rs.uniform01() - 1.0);
            x[i] = center[i] + step;
            y[i] = center[i] - step;
        }
    }
};

/// Deterministic point cloud uniform in B_radius(center) (no antithetics).
inline std::vector<Vec> sample_ball_points(const Vec& center, double radius, int count,
                                           std::uint64_t seed) {
    const int n = static_cast<int>(center.size());
    std::vector<Vec> pts;
    pts.reserve(count);
    RandomStream rs(mix_seed(seed, 0));
    for (int k = 0; k < count; ++k) {
        Vec g = rs.gaussian_vec(n);
        const double nrm = norm2(g);
        const double rho = radius * std::pow(rs.uniform01(), 1.0 / n);
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = center[i] + rho * (g[i] / nrm);
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Deterministic unit directions (Gaussian, normalized).
inline std::vector<Vec> sample_directions(int n, int count, std::uint64_t seed) {
    std::vector<Vec> dirs;
    dirs.reserve(count);
    RandomStream rs(mix_seed(seed, 0));
    for (int k = 0; k < count; ++k) {
        Vec g = rs.gaussian_vec(n);
        const double nrm = norm2(g);
        for (int i = 0; i < n; ++i) g[i] /= nrm;
        dirs.push_back(std::move(g));
    }
    return dirs;
}

}  // namespace confcurve
