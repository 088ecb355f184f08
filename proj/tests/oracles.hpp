#pragma once

// Independent oracles for the test suites. These deliberately avoid the
// library's computational paths: Laplace-expansion determinants instead of
// LU, dense minor enumeration instead of sparse maps, random frame search
// for the comass, series and quadrature for the closed-form integrals.

#include <cmath>
#include <cstdint>
#include <vector>

#include "confcurve/confcurve.hpp"

namespace oracles {

using namespace confcurve;

// Determinant by recursive cofactor (Laplace) expansion.
inline double laplace_det(const Mat& m) {
    const int k = m.rows;
    if (k == 1) return m(0, 0);
    double sum = 0.0;
    Mat minor(k - 1, k - 1);
    for (int j = 0; j < k; ++j) {
        for (int r = 1; r < k; ++r) {
            int mc = 0;
            for (int c = 0; c < k; ++c) {
                if (c == j) continue;
                minor(r - 1, mc++) = m(r, c);
            }
        }
        const double s = (j % 2 == 0) ? 1.0 : -1.0;
        sum += s * m(0, j) * laplace_det(minor);
    }
    return sum;
}

// star F^*omega by brute force over every C(m,n) row minor.
inline double brute_pullback(const AlternatingForm& omega, const Mat& j) {
    const int n = omega.degree();
    double sum = 0.0;
    Mat sub(n, n);
    for (const MultiIndex& idx : all_multi_indices(n, omega.ambient())) {
        const double c = omega.coefficient(idx);
        if (c == 0.0) continue;
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) sub(r, cc) = j(idx.axes()[r] - 1, cc);
        sum += c * laplace_det(sub);
    }
    return sum;
}

// Comass by random orthonormal frame search followed by an ascent polish
// from the empirical argmax (the classical values serve as cross-checks in
// the calling tests).
inline double brute_force_comass(const AlternatingForm& omega, long frames, std::uint64_t seed) {
    RandomStream rs(seed);
    double best = -1.0;
    Mat best_frame;
    for (long k = 0; k < frames; ++k) {
        Mat v = random_orthonormal_columns(omega.ambient(), omega.degree(), rs);
        const double val = std::abs(pullback_top(omega, v));
        if (val > best) {
            best = val;
            best_frame = v;
        }
    }
    if (omega.degree() >= 2 && pullback_top(omega, best_frame) < 0.0)
        for (int i = 0; i < best_frame.rows; ++i) std::swap(best_frame(i, 0), best_frame(i, 1));
    return confcurve::detail::comass_ascent(omega, best_frame, 1e-12, 20000).value;
}

// I_1(x) by its power series: sum_k (x/2)^{2k+1} / (k! (k+1)!).
inline double bessel_i1(double x) {
    const double half = 0.5 * x;
    double term = half;  // k = 0
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= half * half / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// Ball average of exp(2 rho cos theta) over B_r(0) in R^2 by polar
// quadrature: periodic trapezoid in theta, Simpson in rho. Independent route
// to the Bessel identity used for the ComplexExp energy.
inline double complex_exp_ball_average_quadrature(double r, int n_theta = 2048,
                                                  int n_rho = 2049) {
    auto ring = [&](double rho) {
        double sum = 0.0;
        for (int k = 0; k < n_theta; ++k) {
            const double theta = 2.0 * 3.14159265358979323846 * k / n_theta;
            sum += std::exp(2.0 * rho * std::cos(theta));
        }
        return sum / n_theta * rho;
    };
    const double h = r / (n_rho - 1);
    double integral = 0.0;
    for (int i = 0; i < n_rho; ++i) {
        const double w = (i == 0 || i == n_rho - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        integral += w * ring(i * h);
    }
    integral *= h / 3.0;           // int_0^r ring(rho) drho
    return 2.0 * integral / (r * r);  // 2 pi .. / (pi r^2)
}

}  // namespace oracles
