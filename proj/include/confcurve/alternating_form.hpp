#pragma once

// Constant-coefficient alternating forms on R^m with sparse coefficient
// storage: the catalog calibrations have a handful of nonzero coefficients
// even when C(m,n) is large.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "confcurve/linalg.hpp"
#include "confcurve/multi_index.hpp"

namespace confcurve {

class AlternatingForm {
  public:
    AlternatingForm(int degree, int ambient) : degree_(degree), ambient_(ambient) {
        if (ambient < 1) throw std::invalid_argument("AlternatingForm: ambient must be >= 1");
        if (degree < 0) throw std::invalid_argument("AlternatingForm: negative degree");
    }

    /// dx_{axes[0]} ^ ... ^ dx_{axes[k-1]} (axes strictly increasing).
    static AlternatingForm basis(std::vector<int> axes, int ambient, double c = 1.0) {
        AlternatingForm f(static_cast<int>(axes.size()), ambient);
        f.add(MultiIndex(std::move(axes), ambient), c);
        return f;
    }

    static AlternatingForm zero(int degree, int ambient) { return AlternatingForm(degree, ambient); }

    int degree() const { return degree_; }
    int ambient() const { return ambient_; }
    bool is_zero() const { return coeff_.empty(); }
    /// A wedge past top degree carries this flag: necessarily the zero form.
    bool degenerate_degree() const { return degree_ > ambient_; }

    const std::map<MultiIndex, double>& coefficients() const { return coeff_; }

    double coefficient(const MultiIndex& i) const {
        auto it = coeff_.find(i);
        return it == coeff_.end() ? 0.0 : it->second;
    }

    void add(const MultiIndex& i, double c) {
        if (i.degree() != degree_ || i.ambient() != ambient_)
            throw std::invalid_argument("AlternatingForm::add: index degree/ambient mismatch");
        auto it = coeff_.find(i);
        const double v = (it == coeff_.end() ? 0.0 : it->second) + c;
        if (v == 0.0) {
            if (it != coeff_.end()) coeff_.erase(it);
        } else if (it == coeff_.end()) {
            coeff_.emplace(i, v);
        } else {
            it->second = v;
        }
    }

    AlternatingForm& operator+=(const AlternatingForm& o) {
        if (o.degree_ != degree_ || o.ambient_ != ambient_)
            throw std::invalid_argument("AlternatingForm: degree/ambient mismatch in sum");
        for (const auto& [i, c] : o.coeff_) add(i, c);
        return *this;
    }

    friend AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) {
        a += b;
        return a;
    }

    friend AlternatingForm operator*(double s, const AlternatingForm& f) {
        AlternatingForm out(f.degree_, f.ambient_);
        if (s == 0.0) return out;
        for (const auto& [i, c] : f.coeff_) out.coeff_.emplace(i, s * c);
        return out;
    }

    friend AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) {
        a += -1.0 * b;
        return a;
    }

    double max_abs_coefficient() const {
        double s = 0.0;
        for (const auto& [i, c] : coeff_) s = std::max(s, std::abs(c));
        return s;
    }

    /// Sum of |coefficients|: a valid (loose) upper bound for the comass,
    /// since each orthonormal minor determinant is at most 1.
    double l1_coefficient_norm() const {
        double s = 0.0;
        for (const auto& [i, c] : coeff_) s += std::abs(c);
        return s;
    }

    bool equals(const AlternatingForm& o, double tol) const {
        if (o.degree_ != degree_ || o.ambient_ != ambient_) return false;
        for (const auto& [i, c] : coeff_)
            if (std::abs(c - o.coefficient(i)) > tol) return false;
        for (const auto& [i, c] : o.coeff_)
            if (std::abs(c - coefficient(i)) > tol) return false;
        return true;
    }

  private:
    int degree_;
    int ambient_;
    std::map<MultiIndex, double> coeff_;
};

namespace detail {

// Sign of merging two strictly increasing axis tuples; 0 on a repeated axis.
// Counts the transpositions needed to interleave `b` into `a`.
inline int merge_sign(const std::vector<int>& a, const std::vector<int>& b,
                      std::vector<int>& merged) {
    merged.clear();
    merged.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            merged.push_back(a[i++]);
        } else {
            inversions += static_cast<long>(a.size() - i);
            merged.push_back(b[j++]);
        }
    }
    while (i < a.size()) merged.push_back(a[i++]);
    while (j < b.size()) merged.push_back(b[j++]);
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace detail

/// Wedge product. Degrees add; if p+q exceeds the ambient dimension the
/// result is the zero form of that (degenerate) degree, query it via
/// degenerate_degree().
inline AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    if (a.ambient() != b.ambient())
        throw std::invalid_argument("wedge: mismatched ambient dimension");
    const int deg = a.degree() + b.degree();
    AlternatingForm out(deg, a.ambient());
    if (deg > a.ambient()) return out;
    std::vector<int> merged;
    for (const auto& [ia, ca] : a.coefficients())
        for (const auto& [ib, cb] : b.coefficients()) {
            const int sign = detail::merge_sign(ia.axes(), ib.axes(), merged);
            if (sign == 0) continue;
            out.add(MultiIndex(merged, a.ambient()), sign * ca * cb);
        }
    return out;
}

/// Hodge star for the Euclidean metric and standard orientation:
/// star(dx_I) = sign(I, I^c) dx_{I^c}. Top-degree forms land on the scalar
/// unit (the empty index).
inline AlternatingForm hodge_star(const AlternatingForm& a) {
    AlternatingForm out(a.ambient() - a.degree(), a.ambient());
    for (const auto& [i, c] : a.coefficients())
        out.add(i.complement(), i.complement_sign() * c);
    return out;
}

/// The scalar a degree-0 form is identified with.
inline double scalar_part(const AlternatingForm& a) {
    if (a.degree() != 0) throw std::invalid_argument("scalar_part: form has positive degree");
    if (a.is_zero()) return 0.0;
    return a.coefficients().begin()->second;
}

namespace detail {

// det of the rows `axes` (1-based) of the m-by-n matrix `v`.
inline double row_minor_det(const Mat& v, const std::vector<int>& axes) {
    const int n = static_cast<int>(axes.size());
    Mat sub(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sub(r, c) = v(axes[r] - 1, c);
    return det(sub);
}

}  // namespace detail

/// Sum over coefficients of omega_I det(J_I): the scalar star(F^* omega) when
/// J is the differential of F. Columns need not be orthonormal.
inline double pullback_top(const AlternatingForm& omega, const Mat& j) {
    if (j.rows != omega.ambient())
        throw std::invalid_argument("pullback_top: Jacobian row count != ambient dimension");
    if (j.cols != omega.degree())
        throw std::invalid_argument("pullback_top: Jacobian column count != form degree");
    double s = 0.0;
    for (const auto& [i, c] : omega.coefficients()) s += c * detail::row_minor_det(j, i.axes());
    return s;
}

/// Pullback through a linear map a: R^k -> R^m (columns of `a` are the images
/// of the domain basis). Coefficient on dx_J is sum_I omega_I det(a[I, J]).
inline AlternatingForm pullback_form(const AlternatingForm& omega, const Mat& a) {
    if (a.rows != omega.ambient())
        throw std::invalid_argument("pullback_form: map target != form ambient");
    const int n = omega.degree();
    AlternatingForm out(n, a.cols);
    Mat cols(a.rows, n);
    for (const MultiIndex& target : all_multi_indices(n, a.cols)) {
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < a.rows; ++r) cols(r, c) = a(r, target.axes()[c] - 1);
        double s = 0.0;
        for (const auto& [i, coef] : omega.coefficients())
            s += coef * detail::row_minor_det(cols, i.axes());
        if (s != 0.0) out.add(target, s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plain-text serialization.
//
//   form degree=<n> ambient=<m>
//   I1 I2 ... In  c        (one line per coefficient, axes 1-based)
//
// Coefficients are printed with 17 significant digits, which round-trips
// doubles exactly.
// ---------------------------------------------------------------------------

inline std::string serialize_form(const AlternatingForm& f) {
    std::string out = "form degree=" + std::to_string(f.degree()) +
                      " ambient=" + std::to_string(f.ambient()) + "\n";
    char buf[64];
    for (const auto& [i, c] : f.coefficients()) {
        std::string line;
        for (int a : i.axes()) {
            line += std::to_string(a);
            line += ' ';
        }
        std::snprintf(buf, sizeof buf, "%.17g", c);
        line += ' ';
        line += buf;
        out += line;
        out += '\n';
    }
    return out;
}

inline AlternatingForm parse_form(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int degree = -1, ambient = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        int n, m;
        if (std::sscanf(line.c_str(), "form degree=%d ambient=%d", &n, &m) != 2)
            throw std::runtime_error("parse_form: line " + std::to_string(lineno) +
                                     ": expected 'form degree=<n> ambient=<m>'");
        degree = n;
        ambient = m;
        break;
    }
    if (degree < 0) throw std::runtime_error("parse_form: missing header line");
    AlternatingForm f(degree, ambient);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> axes(degree);
        for (int k = 0; k < degree; ++k)
            if (!(ls >> axes[k]))
                throw std::runtime_error("parse_form: line " + std::to_string(lineno) +
                                         ": expected " + std::to_string(degree) + " axes");
        double c;
        if (!(ls >> c))
            throw std::runtime_error("parse_form: line " + std::to_string(lineno) +
                                     ": missing coefficient");
        try {
            f.add(MultiIndex(std::move(axes), ambient), c);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("parse_form: line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return f;
}

}  // namespace confcurve
