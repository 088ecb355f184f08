#pragma once

// Ordered n-tuples of vectors in R^m. Orthonormal frames are the feasible
// set of the comass problem.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "confcurve/alternating_form.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/rng.hpp"

namespace confcurve {

struct Frame {
    std::vector<Vec> vectors;

    Frame() = default;
    explicit Frame(std::vector<Vec> vs) : vectors(std::move(vs)) {
        for (const Vec& v : vectors) {
            if (v.size() != vectors.front().size())
                throw std::invalid_argument("Frame: vectors of unequal dimension");
            for (double x : v)
                if (!std::isfinite(x)) throw std::invalid_argument("Frame: non-finite entry");
        }
    }

    static Frame from_matrix(const Mat& m) {
        std::vector<Vec> vs;
        vs.reserve(m.cols);
        for (int j = 0; j < m.cols; ++j) vs.push_back(m.col(j));
        return Frame(std::move(vs));
    }

    static Frame standard_basis(int m, const std::vector<int>& axes) {
        std::vector<Vec> vs;
        for (int a : axes) {
            Vec v(m, 0.0);
            v[a - 1] = 1.0;
            vs.push_back(std::move(v));
        }
        return Frame(std::move(vs));
    }

    int count() const { return static_cast<int>(vectors.size()); }
    int ambient() const { return vectors.empty() ? 0 : static_cast<int>(vectors[0].size()); }

    Mat as_matrix() const {
        Mat m(ambient(), count());
        for (int j = 0; j < count(); ++j) m.set_col(j, vectors[j]);
        return m;
    }

    double orthonormality_defect() const {
        double worst = 0.0;
        for (int i = 0; i < count(); ++i)
            for (int j = i; j < count(); ++j) {
                const double g = dot(vectors[i], vectors[j]) - (i == j ? 1.0 : 0.0);
                worst = std::max(worst, std::abs(g));
            }
        return worst;
    }

    bool is_orthonormal(double tol = 1e-10) const { return orthonormality_defect() <= tol; }
};

inline Frame random_orthonormal_frame(int m, int n, RandomStream& rs) {
    return Frame::from_matrix(random_orthonormal_columns(m, n, rs));
}

/// omega(v_1 ^ ... ^ v_n) = sum_I omega_I det(M_I), M the frame matrix.
inline double evaluate(const AlternatingForm& omega, const Frame& f) {
    if (f.ambient() != omega.ambient())
        throw std::invalid_argument("evaluate: frame ambient != form ambient");
    if (f.count() != omega.degree())
        throw std::invalid_argument("evaluate: frame size != form degree");
    return pullback_top(omega, f.as_matrix());
}

}  // namespace confcurve
