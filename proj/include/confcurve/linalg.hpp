#pragma once

// Small dense linear algebra for desk-scale geometry (m <= 8 or so).
// Everything is 64-bit double, row-major, value semantics.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace confcurve {

using Vec = std::vector<double>;

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int k) {
        Mat m(k, k);
        for (int i = 0; i < k; ++i) m(i, i) = 1.0;
        return m;
    }

    Vec col(int j) const {
        Vec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const Vec& v) {
        for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }
};

inline bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

// The differential DF at a point, an m-by-n matrix of partials.
using Jacobian = Mat;

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec operator+(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

inline Vec operator-(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

inline Vec operator*(double s, const Vec& x) {
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = s * x[i];
    return z;
}

inline double dist2(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Mat matmul(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xik = x(i, k);
            for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
        }
    return z;
}

inline Vec matvec(const Mat& m, const Vec& x) {
    assert(m.cols == static_cast<int>(x.size()));
    Vec y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

inline double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s = std::max(s, std::abs(v));
    return s;
}

// Integer power by repeated multiplication. Unlike std::pow this commutes
// bit-exactly with power-of-two scalings of the base, which the scaling
// covariance checks rely on.
inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// ---------------------------------------------------------------------------
// Determinants: closed form for k <= 3, LU with partial pivoting above.
// ---------------------------------------------------------------------------

namespace detail {

inline double det_lu(Mat m) {
    const int k = m.rows;
    double sign = 1.0;
    for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int r = c + 1; r < k; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < k; ++j) std::swap(m(piv, j), m(c, j));
            sign = -sign;
        }
        const double d = m(c, c);
        for (int r = c + 1; r < k; ++r) {
            const double f = m(r, c) / d;
            if (f == 0.0) continue;
            for (int j = c + 1; j < k; ++j) m(r, j) -= f * m(c, j);
        }
    }
    double det = sign;
    for (int c = 0; c < k; ++c) det *= m(c, c);
    return det;
}

}  // namespace detail

inline double det(const Mat& m) {
    assert(m.rows == m.cols);
    switch (m.rows) {
        case 0:
            return 1.0;
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        default:
            return detail::det_lu(m);
    }
}

// Matrix of cofactors C with d det(M)/dM = C. Minor determinants reuse det().
inline Mat cofactor_matrix(const Mat& m) {
    const int k = m.rows;
    assert(k == m.cols && k >= 1);
    Mat c(k, k);
    if (k == 1) {
        c(0, 0) = 1.0;
        return c;
    }
    Mat minor(k - 1, k - 1);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int mr = 0;
            for (int r = 0; r < k; ++r) {
                if (r == i) continue;
                int mc = 0;
                for (int cc = 0; cc < k; ++cc) {
                    if (cc == j) continue;
                    minor(mr, mc) = m(r, cc);
                    ++mc;
                }
                ++mr;
            }
            const double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            c(i, j) = s * det(minor);
        }
    return c;
}

// Solve A x = b for square A by LU with partial pivoting.
inline Vec solve(Mat a, Vec b) {
    const int k = a.rows;
    assert(a.cols == k && static_cast<int>(b.size()) == k);
    for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int r = c + 1; r < k; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (a(piv, c) == 0.0) throw std::runtime_error("solve: singular matrix");
        if (piv != c) {
            for (int j = 0; j < k; ++j) std::swap(a(piv, j), a(c, j));
            std::swap(b[piv], b[c]);
        }
        for (int r = c + 1; r < k; ++r) {
            const double f = a(r, c) / a(c, c);
            if (f == 0.0) continue;
            for (int j = c + 1; j < k; ++j) a(r, j) -= f * a(c, j);
            b[r] -= f * b[c];
        }
    }
    Vec x(k);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int j = r + 1; j < k; ++j) s -= a(r, j) * x[j];
        x[r] = s / a(r, r);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Orthonormalization and symmetric eigensolver.
// ---------------------------------------------------------------------------

// Modified Gram-Schmidt with one reorthogonalization pass. Returns false if a
// column is (numerically) in the span of its predecessors.
inline bool orthonormalize_columns(Mat& v) {
    const int n = v.cols;
    for (int j = 0; j < n; ++j) {
        Vec c = v.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int p = 0; p < j; ++p) {
                const Vec q = v.col(p);
                const double proj = dot(q, c);
                for (int i = 0; i < v.rows; ++i) c[i] -= proj * q[i];
            }
        const double nrm = norm2(c);
        if (nrm < 1e-13) return false;
        for (int i = 0; i < v.rows; ++i) c[i] /= nrm;
        v.set_col(j, c);
    }
    return true;
}

// Cyclic Jacobi on a symmetric matrix; eigenvalues in `eval`, optionally the
// orthonormal eigenvectors as columns of `evec`.
inline void jacobi_eigen(Mat s, Vec& eval, Mat* evec = nullptr) {
    const int k = s.rows;
    assert(s.cols == k);
    if (evec) *evec = Mat::identity(k);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-30 * (1.0 + frobenius_norm(s))) break;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int i = 0; i < k; ++i) {
                    const double sip = s(i, p), siq = s(i, q);
                    s(i, p) = c * sip - sn * siq;
                    s(i, q) = sn * sip + c * siq;
                }
                for (int i = 0; i < k; ++i) {
                    const double spi = s(p, i), sqi = s(q, i);
                    s(p, i) = c * spi - sn * sqi;
                    s(q, i) = sn * spi + c * sqi;
                }
                if (evec)
                    for (int i = 0; i < k; ++i) {
                        const double vip = (*evec)(i, p), viq = (*evec)(i, q);
                        (*evec)(i, p) = c * vip - sn * viq;
                        (*evec)(i, q) = sn * vip + c * viq;
                    }
            }
    }
    eval.resize(k);
    for (int i = 0; i < k; ++i) eval[i] = s(i, i);
}

// Largest singular value of an m-by-n matrix via the n-by-n Gram matrix:
// closed form for n <= 2, Jacobi iteration above.
inline double opnorm(const Mat& j) {
    const int n = j.cols;
    if (n == 0) return 0.0;
    if (n == 1) {
        double s = 0.0;
        for (int i = 0; i < j.rows; ++i) s += j(i, 0) * j(i, 0);
        return std::sqrt(s);
    }
    if (n == 2) {
        double p = 0.0, q = 0.0, s = 0.0;
        for (int i = 0; i < j.rows; ++i) {
            p += j(i, 0) * j(i, 0);
            q += j(i, 1) * j(i, 1);
            s += j(i, 0) * j(i, 1);
        }
        const double half = 0.5 * (p - q);
        const double lmax = 0.5 * (p + q) + std::sqrt(half * half + s * s);
        return std::sqrt(std::max(lmax, 0.0));
    }
    Mat gram(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i < j.rows; ++i) s += j(i, a) * j(i, b);
            gram(a, b) = gram(b, a) = s;
        }
    Vec ev;
    jacobi_eigen(gram, ev);
    const double lmax = *std::max_element(ev.begin(), ev.end());
    return std::sqrt(std::max(lmax, 0.0));
}

// ---------------------------------------------------------------------------
// Thin SVD (for Procrustes alignment) via Jacobi on the Gram matrix.
// ---------------------------------------------------------------------------

struct ThinSvd {
    Mat u;            // m x n, orthonormal columns
    Vec sigma;        // n, descending
    Mat v;            // n x n orthogonal
};

inline ThinSvd thin_svd(const Mat& a) {
    const int m = a.rows, n = a.cols;
    Mat gram(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += a(i, p) * a(i, q);
            gram(p, q) = gram(q, p) = s;
        }
    Vec ev;
    Mat vecs;
    jacobi_eigen(gram, ev, &vecs);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return ev[x] > ev[y]; });

    ThinSvd out;
    out.sigma.resize(n);
    out.v = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.sigma[j] = std::sqrt(std::max(ev[order[j]], 0.0));
        for (int i = 0; i < n; ++i) out.v(i, j) = vecs(i, order[j]);
    }
    out.u = Mat(m, n);
    const double smax = out.sigma.empty() ? 0.0 : out.sigma[0];
    for (int j = 0; j < n; ++j) {
        if (out.sigma[j] > 1e-13 * (smax > 0.0 ? smax : 1.0)) {
            for (int i = 0; i < m; ++i) {
                double s = 0.0;
                for (int p = 0; p < n; ++p) s += a(i, p) * out.v(p, j);
                out.u(i, j) = s / out.sigma[j];
            }
        } else {
            // null direction: complete to an orthonormal set
            Vec c(m, 0.0);
            for (int attempt = 0; attempt < m; ++attempt) {
                std::fill(c.begin(), c.end(), 0.0);
                c[(j + attempt) % m] = 1.0;
                for (int p = 0; p < j; ++p) {
                    const Vec q = out.u.col(p);
                    const double proj = dot(q, c);
                    for (int i = 0; i < m; ++i) c[i] -= proj * q[i];
                }
                const double nrm = norm2(c);
                if (nrm > 1e-8) {
                    for (int i = 0; i < m; ++i) c[i] /= nrm;
                    break;
                }
            }
            out.u.set_col(j, c);
        }
    }
    return out;
}

}  // namespace confcurve
