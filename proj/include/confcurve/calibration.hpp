#pragma once

// Catalog of constant-coefficient calibrations and a numerical comass
// estimator. The comass of omega is the maximum of omega(v_1 ^ ... ^ v_n)
// over orthonormal n-frames; we estimate it by multi-start projected-gradient
// ascent on the Stiefel manifold with re-orthonormalization as retraction.
//
// Sign conventions (fixed here, gated by the comass ~ 1 regression tests):
//   - complex pairing z_j = x_{2j-1} + i x_{2j};
//   - symplectic(d)            = sum_j dx_{2j-1} ^ dx_{2j} on R^{2d};
//   - kahler_power(d, k)       = symplectic(d)^k / k!;
//   - special_lagrangian(n, t) = Re(e^{-it} dz_1 ^ ... ^ dz_n) on R^{2n};
//   - associative              = e123 + e145 + e167 + e246 - e257 - e347 - e356
//                                on R^7 (Harvey-Lawson);
//   - cayley                   = dx_1 ^ shift(assoc) + shift(star_7 assoc) on R^8,
//                                shift moving axes 1..7 to 2..8.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "confcurve/alternating_form.hpp"
#include "confcurve/frame.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/rng.hpp"

namespace confcurve {

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

inline AlternatingForm volume_form(int n) {
    if (n < 1) throw std::invalid_argument("volume_form: n must be >= 1");
    std::vector<int> axes(n);
    for (int i = 0; i < n; ++i) axes[i] = i + 1;
    return AlternatingForm::basis(std::move(axes), n);
}

inline AlternatingForm symplectic_form(int d) {
    if (d < 1) throw std::invalid_argument("symplectic_form: d must be >= 1");
    AlternatingForm f(2, 2 * d);
    for (int j = 1; j <= d; ++j) f.add(MultiIndex({2 * j - 1, 2 * j}, 2 * d), 1.0);
    return f;
}

inline AlternatingForm kahler_power_form(int d, int k) {
    if (d < 1 || k < 1 || k > d)
        throw std::invalid_argument("kahler_power_form: need 1 <= k <= d");
    const AlternatingForm sym = symplectic_form(d);
    AlternatingForm f = sym;
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) {
        f = wedge(f, sym);
        factorial *= i;
    }
    return (1.0 / factorial) * f;
}

inline AlternatingForm special_lagrangian_form(int n, double theta) {
    if (n < 1) throw std::invalid_argument("special_lagrangian_form: n must be >= 1");
    const int m = 2 * n;
    // fold dz_1 ^ ... ^ dz_n as a (real, imaginary) pair of forms
    AlternatingForm re = AlternatingForm::basis({1}, m);       // dx_1
    AlternatingForm im = AlternatingForm::basis({2}, m);       // dx_2
    for (int j = 2; j <= n; ++j) {
        const AlternatingForm a = AlternatingForm::basis({2 * j - 1}, m);
        const AlternatingForm b = AlternatingForm::basis({2 * j}, m);
        AlternatingForm new_re = wedge(re, a) - wedge(im, b);
        AlternatingForm new_im = wedge(re, b) + wedge(im, a);
        re = std::move(new_re);
        im = std::move(new_im);
    }
    return std::cos(theta) * re + std::sin(theta) * im;
}

inline AlternatingForm associative_form() {
    AlternatingForm f(3, 7);
    f.add(MultiIndex({1, 2, 3}, 7), 1.0);
    f.add(MultiIndex({1, 4, 5}, 7), 1.0);
    f.add(MultiIndex({1, 6, 7}, 7), 1.0);
    f.add(MultiIndex({2, 4, 6}, 7), 1.0);
    f.add(MultiIndex({2, 5, 7}, 7), -1.0);
    f.add(MultiIndex({3, 4, 7}, 7), -1.0);
    f.add(MultiIndex({3, 5, 6}, 7), -1.0);
    return f;
}

inline AlternatingForm cayley_form() {
    const AlternatingForm phi = associative_form();
    const AlternatingForm psi = hodge_star(phi);
    auto shift = [](const AlternatingForm& f) {
        AlternatingForm out(f.degree(), 8);
        for (const auto& [i, c] : f.coefficients()) {
            std::vector<int> axes = i.axes();
            for (int& a : axes) ++a;
            out.add(MultiIndex(std::move(axes), 8), c);
        }
        return out;
    };
    return wedge(AlternatingForm::basis({1}, 8), shift(phi)) + shift(psi);
}

/// Catalog lookup by CLI-style name, e.g. "volume:3", "symplectic:2",
/// "kahler:3,2", "special_lagrangian:2,0.5", "associative", "cayley".
inline AlternatingForm catalog(const std::string& spec) {
    std::string name = spec;
    std::vector<double> params;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        std::string rest = spec.substr(colon + 1);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t used = 0;
            params.push_back(std::stod(rest.substr(pos), &used));
            pos += used;
            if (pos < rest.size() && rest[pos] == ',') ++pos;
        }
    }
    auto int_param = [&](size_t k) {
        if (k >= params.size())
            throw std::invalid_argument("catalog: '" + name + "' missing parameter " +
                                        std::to_string(k + 1));
        return static_cast<int>(params[k]);
    };
    if (name == "volume") return volume_form(int_param(0));
    if (name == "symplectic") return symplectic_form(int_param(0));
    if (name == "kahler" || name == "kahler_power")
        return kahler_power_form(int_param(0), int_param(1));
    if (name == "special_lagrangian" || name == "slag")
        return special_lagrangian_form(int_param(0), params.size() > 1 ? params[1] : 0.0);
    if (name == "associative") return associative_form();
    if (name == "cayley") return cayley_form();
    throw std::invalid_argument("catalog: unknown form '" + name + "'");
}

// ---------------------------------------------------------------------------
// Comass
// ---------------------------------------------------------------------------

struct ComassReport {
    double estimate = 0.0;
    Frame best_frame;
    int restarts_used = 0;
    double ascent_tolerance = 0.0;
    double certified_upper_bound = 0.0;
    bool converged = true;  // false if any restart hit the iteration cap
};

struct ComassOptions {
    int restarts = 64;
    double tol = 1e-10;
    int max_iterations = 10000;
    std::uint64_t seed = 0;
};

namespace detail {

// Ambient gradient of V |-> sum_I omega_I det(V_I): scatter the cofactor
// matrix of each minor back into its rows.
inline Mat comass_gradient(const AlternatingForm& omega, const Mat& v) {
    const int n = v.cols;
    Mat grad(v.rows, n);
    Mat sub(n, n);
    for (const auto& [i, c] : omega.coefficients()) {
        const std::vector<int>& axes = i.axes();
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) sub(r, cc) = v(axes[r] - 1, cc);
        const Mat cof = cofactor_matrix(sub);
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) grad(axes[r] - 1, cc) += c * cof(r, cc);
    }
    return grad;
}

struct AscentResult {
    double value = 0.0;
    Mat frame;
    int iterations = 0;
    bool converged = false;
};

// Projected-gradient ascent with QR retraction and backtracking line search;
// the line search makes every accepted step non-decreasing in the objective.
// Steps are proportional to the projected gradient of the max-normalized
// form, so the trajectory is invariant under positive rescaling of omega and
// the movement shrinks with the gradient near a maximizer.
inline AscentResult comass_ascent(const AlternatingForm& omega, Mat v, double tol,
                                  int max_iterations,
                                  std::vector<double>* trace = nullptr) {
    AscentResult res;
    double value = pullback_top(omega, v);
    if (trace) trace->push_back(value);
    double step = 0.5;
    int it = 0;
    for (; it < max_iterations; ++it) {
        Mat grad = comass_gradient(omega, v);
        // tangent projection at v: g - v sym(v^T g)
        const Mat vtg = matmul(transpose(v), grad);
        Mat sym(v.cols, v.cols);
        for (int a = 0; a < v.cols; ++a)
            for (int b = 0; b < v.cols; ++b) sym(a, b) = 0.5 * (vtg(a, b) + vtg(b, a));
        const Mat vsym = matmul(v, sym);
        for (size_t k = 0; k < grad.a.size(); ++k) grad.a[k] -= vsym.a[k];
        const double gnorm = frobenius_norm(grad);
        if (gnorm * std::max(step, 1.0) < tol) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        double movement = 0.0;
        while (step * gnorm > 0.25 * tol) {
            Mat cand = v;
            for (size_t k = 0; k < cand.a.size(); ++k) cand.a[k] += step * grad.a[k];
            if (!orthonormalize_columns(cand)) {
                step *= 0.5;
                continue;
            }
            const double cand_value = pullback_top(omega, cand);
            if (cand_value >= value) {
                movement = 0.0;
                for (size_t k = 0; k < cand.a.size(); ++k) {
                    const double d = cand.a[k] - v.a[k];
                    movement += d * d;
                }
                movement = std::sqrt(movement);
                v = std::move(cand);
                value = cand_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (trace) trace->push_back(value);
        if (!accepted || movement < tol) {
            res.converged = true;
            break;
        }
        step = std::min(step * 1.5, 1e3);
    }
    res.value = value;
    res.frame = std::move(v);
    res.iterations = it;
    return res;
}

}  // namespace detail

/// Multi-start comass estimate; a lower bound on the true comass by
/// construction. Restart k draws its frame from sub-seed mix(seed, k), so the
/// estimate is non-decreasing in the restart count for a fixed seed and
/// independent of restart execution order.
inline ComassReport comass(const AlternatingForm& omega, const ComassOptions& opts = {}) {
    if (omega.is_zero()) throw std::invalid_argument("comass: zero form");
    if (opts.restarts < 1) throw std::invalid_argument("comass: restarts must be >= 1");
    const int m = omega.ambient();
    const int n = omega.degree();

    // ascend the direction omega/scale; the objective scale cancels from every
    // line-search comparison, so the estimate is homogeneous in omega.
    const double scale = omega.max_abs_coefficient();
    const AlternatingForm unit = (1.0 / scale) * omega;

    ComassReport rep;
    rep.restarts_used = opts.restarts;
    rep.ascent_tolerance = opts.tol;
    rep.certified_upper_bound = omega.l1_coefficient_norm();

    double best = -1.0;
    Mat best_frame;
    for (int k = 0; k < opts.restarts; ++k) {
        RandomStream rs(mix_seed(opts.seed, static_cast<std::uint64_t>(k)));
        Mat v0 = random_orthonormal_columns(m, n, rs);
        // evaluation is sign-flipped by swapping two frame vectors, so ascend
        // from the orientation that starts positive
        if (n >= 2 && pullback_top(unit, v0) < 0.0) {
            for (int i = 0; i < m; ++i) std::swap(v0(i, 0), v0(i, 1));
        }
        detail::AscentResult r =
            detail::comass_ascent(unit, std::move(v0), opts.tol, opts.max_iterations);
        if (!r.converged) rep.converged = false;
        if (r.value > best) {
            best = r.value;
            best_frame = std::move(r.frame);
        }
    }
    rep.best_frame = Frame::from_matrix(best_frame);
    rep.estimate = scale * pullback_top(unit, best_frame);
    return rep;
}

/// omega / comass estimate, so the result has comass ~ 1.
inline AlternatingForm normalize(const AlternatingForm& omega, const ComassReport& report) {
    if (!(report.estimate > 0.0) || report.estimate < 1e-300)
        throw std::invalid_argument("normalize: vanishing comass estimate");
    return (1.0 / report.estimate) * omega;
}

struct CalibrationVerdict {
    bool is_calibration = false;
    double estimate = 0.0;
};

/// Constant-coefficient forms are closed, so the calibration condition
/// reduces to comass <= 1 (up to tol).
inline CalibrationVerdict is_calibration(const AlternatingForm& omega, double tol = 1e-6,
                                         const ComassOptions& opts = {}) {
    const ComassReport rep = comass(omega, opts);
    return CalibrationVerdict{rep.estimate <= 1.0 + tol, rep.estimate};
}

}  // namespace confcurve
