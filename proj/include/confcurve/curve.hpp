#pragma once

// Evaluable curve models R^n -> R^m with exact Jacobians, and the residual
// of the generalized Cauchy-Riemann equation  ||DF||^n = star F^* omega.
// The catalog is closed (no user code execution): affine maps, holomorphic
// polynomial curves under the pairing z_j = x_{2j-1} + i x_{2j}, the complex
// exponential, and affine pre/post composition. Every model has an analytic
// Jacobian; a central-difference fallback exists for cross-validation only.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "confcurve/alternating_form.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/sampling.hpp"

namespace confcurve {

struct AffineMap {
    Mat a;
    Vec b;

    AffineMap() = default;
    AffineMap(Mat a_, Vec b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a.rows != static_cast<int>(b.size()))
            throw std::invalid_argument("AffineMap: row count != offset size");
    }

    static AffineMap identity(int k) { return AffineMap(Mat::identity(k), Vec(k, 0.0)); }

    Vec apply(const Vec& x) const {
        Vec y(a.rows);
        for (int i = 0; i < a.rows; ++i) {
            double s = 0.0;
            for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
            y[i] = b[i] + s;
        }
        return y;
    }
};

class CurveModel;
using CurvePtr = std::shared_ptr<const CurveModel>;

struct HolomorphicPolynomial {
    // components[j][l] is the coefficient of z^l in the j-th component
    std::vector<std::vector<std::complex<double>>> components;
};

struct ComplexExp {};

struct Composite {
    AffineMap pre;   // invertible affine self-map of the domain
    CurvePtr core;
    AffineMap post;  // affine map from the core target into the final target
};

class CurveModel {
  public:
    using Variant = std::variant<AffineMap, HolomorphicPolynomial, ComplexExp, Composite>;

    CurveModel(int domain_dim, int target_dim, Variant v)
        : n_(domain_dim), m_(target_dim), v_(std::move(v)) {}

    int domain_dim() const { return n_; }
    int target_dim() const { return m_; }
    const Variant& variant() const { return v_; }

  private:
    int n_;
    int m_;
    Variant v_;
};

inline CurveModel affine_model(Mat a, Vec b) {
    const int n = a.cols, m = a.rows;
    return CurveModel(n, m, AffineMap(std::move(a), std::move(b)));
}

inline CurveModel identity_model(int n) { return affine_model(Mat::identity(n), Vec(n, 0.0)); }

inline CurveModel holomorphic_model(std::vector<std::vector<std::complex<double>>> comps) {
    if (comps.empty()) throw std::invalid_argument("holomorphic_model: no components");
    const int m = 2 * static_cast<int>(comps.size());
    return CurveModel(2, m, HolomorphicPolynomial{std::move(comps)});
}

/// z -> z^2 as a map R^2 -> R^2.
inline CurveModel zsquare_model() { return holomorphic_model({{0.0, 0.0, 1.0}}); }

/// z -> z^3.
inline CurveModel zcube_model() { return holomorphic_model({{0.0, 0.0, 0.0, 1.0}}); }

inline CurveModel complex_exp_model() { return CurveModel(2, 2, ComplexExp{}); }

inline CurveModel composite_model(AffineMap pre, CurveModel core, AffineMap post) {
    if (pre.a.rows != pre.a.cols || pre.a.cols != core.domain_dim())
        throw std::invalid_argument("composite_model: pre-map must be a self-map of the domain");
    if (post.a.cols != core.target_dim())
        throw std::invalid_argument("composite_model: post-map domain != core target");
    const int n = core.domain_dim();
    const int m = post.a.rows;
    return CurveModel(n, m,
                      Composite{std::move(pre), std::make_shared<CurveModel>(std::move(core)),
                                std::move(post)});
}

inline CurveModel precompose_affine(CurveModel core, AffineMap pre) {
    AffineMap post = AffineMap::identity(core.target_dim());
    return composite_model(std::move(pre), std::move(core), std::move(post));
}

inline CurveModel postcompose_affine(CurveModel core, AffineMap post) {
    AffineMap pre = AffineMap::identity(core.domain_dim());
    return composite_model(std::move(pre), std::move(core), std::move(post));
}

/// Built-in names: "identity:<n>", "zsquare", "zcube", "exp".
inline CurveModel builtin_model(const std::string& name) {
    if (name.rfind("identity:", 0) == 0) return identity_model(std::stoi(name.substr(9)));
    if (name == "zsquare") return zsquare_model();
    if (name == "zcube") return zcube_model();
    if (name == "exp" || name == "complexexp") return complex_exp_model();
    throw std::invalid_argument("builtin_model: unknown curve '" + name + "'");
}

// ---------------------------------------------------------------------------
// Evaluation and differentiation
// ---------------------------------------------------------------------------

inline Vec eval(const CurveModel& model, const Vec& x);

namespace detail {

inline std::complex<double> horner(const std::vector<std::complex<double>>& c,
                                   std::complex<double> z) {
    std::complex<double> w(0.0, 0.0);
    for (size_t k = c.size(); k-- > 0;) w = w * z + c[k];
    return w;
}

inline std::vector<std::complex<double>> derivative_coeffs(
    const std::vector<std::complex<double>>& c) {
    std::vector<std::complex<double>> d;
    for (size_t l = 1; l < c.size(); ++l) d.push_back(static_cast<double>(l) * c[l]);
    return d;
}

struct EvalVisitor {
    const Vec& x;
    int target_dim;

    Vec operator()(const AffineMap& f) const { return f.apply(x); }

    Vec operator()(const HolomorphicPolynomial& f) const {
        const std::complex<double> z(x[0], x[1]);
        Vec y(target_dim);
        for (size_t j = 0; j < f.components.size(); ++j) {
            const std::complex<double> w = horner(f.components[j], z);
            y[2 * j] = w.real();
            y[2 * j + 1] = w.imag();
        }
        return y;
    }

    Vec operator()(const ComplexExp&) const {
        const double e = std::exp(x[0]);
        return Vec{e * std::cos(x[1]), e * std::sin(x[1])};
    }

    Vec operator()(const Composite& f) const {
        return f.post.apply(eval(*f.core, f.pre.apply(x)));
    }
};

}  // namespace detail

inline Vec eval(const CurveModel& model, const Vec& x) {
    if (static_cast<int>(x.size()) != model.domain_dim())
        throw std::invalid_argument("eval: point dimension != curve domain");
    return std::visit(detail::EvalVisitor{x, model.target_dim()}, model.variant());
}

inline Jacobian jacobian(const CurveModel& model, const Vec& x);

namespace detail {

struct JacobianVisitor {
    const CurveModel& model;
    const Vec& x;

    Jacobian operator()(const AffineMap& f) const { return f.a; }

    Jacobian operator()(const HolomorphicPolynomial& f) const {
        const std::complex<double> z(x[0], x[1]);
        Jacobian j(model.target_dim(), 2);
        for (size_t c = 0; c < f.components.size(); ++c) {
            const std::complex<double> w = horner(derivative_coeffs(f.components[c]), z);
            j(2 * c, 0) = w.real();
            j(2 * c, 1) = -w.imag();
            j(2 * c + 1, 0) = w.imag();
            j(2 * c + 1, 1) = w.real();
        }
        return j;
    }

    Jacobian operator()(const ComplexExp&) const {
        const double e = std::exp(x[0]);
        const double c = std::cos(x[1]), s = std::sin(x[1]);
        Jacobian j(2, 2);
        j(0, 0) = e * c;
        j(0, 1) = -e * s;
        j(1, 0) = e * s;
        j(1, 1) = e * c;
        return j;
    }

    Jacobian operator()(const Composite& f) const {
        const Jacobian inner = jacobian(*f.core, f.pre.apply(x));
        return matmul(f.post.a, matmul(inner, f.pre.a));
    }
};

}  // namespace detail

inline Jacobian jacobian(const CurveModel& model, const Vec& x) {
    if (static_cast<int>(x.size()) != model.domain_dim())
        throw std::invalid_argument("jacobian: point dimension != curve domain");
    return std::visit(detail::JacobianVisitor{model, x}, model.variant());
}

/// Central-difference Jacobian, for cross-validating the analytic one.
inline Jacobian fd_jacobian(const CurveModel& model, const Vec& x, double h = 1e-5) {
    Jacobian j(model.target_dim(), model.domain_dim());
    Vec xp = x, xm = x;
    for (int c = 0; c < model.domain_dim(); ++c) {
        xp[c] = x[c] + h;
        xm[c] = x[c] - h;
        const Vec fp = eval(model, xp);
        const Vec fm = eval(model, xm);
        for (int r = 0; r < model.target_dim(); ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
        xp[c] = x[c];
        xm[c] = x[c];
    }
    return j;
}

// ---------------------------------------------------------------------------
// Conformal residual
// ---------------------------------------------------------------------------

/// ||DF(x)||^n - star F^* omega (x). Zero (to tolerance) exactly where the
/// generalized Cauchy-Riemann equation holds; for a calibration (comass <= 1)
/// the residual is bounded below by -tolerance at every point.
inline double conformal_residual(const CurveModel& model, const AlternatingForm& omega,
                                 const Vec& x) {
    if (omega.degree() != model.domain_dim() || omega.ambient() != model.target_dim())
        throw std::invalid_argument(
            "conformal_residual: form degree/ambient (" + std::to_string(omega.degree()) + "," +
            std::to_string(omega.ambient()) + ") != curve dims (" +
            std::to_string(model.domain_dim()) + "," + std::to_string(model.target_dim()) + ")");
    const Jacobian j = jacobian(model, x);
    return ipow(opnorm(j), model.domain_dim()) - pullback_top(omega, j);
}

struct Region {
    enum class Kind { Ball, Box };
    Kind kind = Kind::Ball;
    Vec center;
    double radius = 1.0;  // Ball
    Vec halfwidth;        // Box

    static Region ball(Vec center, double radius) {
        Region r;
        r.kind = Kind::Ball;
        r.center = std::move(center);
        r.radius = radius;
        return r;
    }
    static Region box(Vec center, Vec halfwidth) {
        Region r;
        r.kind = Kind::Box;
        r.center = std::move(center);
        r.halfwidth = std::move(halfwidth);
        return r;
    }
};

struct ResidualReport {
    std::vector<Vec> points;
    std::vector<double> residuals;
    double max_abs = 0.0;
    double min_signed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
};

/// Sample the region and report the worst |residual|; deterministic in seed.
inline ResidualReport verify_curve(const CurveModel& model, const AlternatingForm& omega,
                                   const Region& region, int count, std::uint64_t seed,
                                   double tol = 1e-9) {
    if (count < 1) throw std::invalid_argument("verify_curve: empty sample");
    if (static_cast<int>(region.center.size()) != model.domain_dim())
        throw std::invalid_argument("verify_curve: region dimension != curve domain");
    ResidualReport rep;
    rep.tolerance = tol;
    rep.seed = seed;
    rep.points.reserve(count);
    rep.residuals.reserve(count);
    RandomStream rs(mix_seed(seed, 0));
    const int n = model.domain_dim();
    for (int k = 0; k < count; ++k) {
        Vec p(n);
        if (region.kind == Region::Kind::Ball) {
            Vec g = rs.gaussian_vec(n);
            const double nrm = norm2(g);
            const double rho = region.radius * std::pow(rs.uniform01(), 1.0 / n);
            for (int i = 0; i < n; ++i) p[i] = region.center[i] + rho * (g[i] / nrm);
        } else {
            for (int i = 0; i < n; ++i)
                p[i] = region.center[i] + region.halfwidth[i] * (2.0 * rs.uniform01() - 1.0);
        }
        const double r = conformal_residual(model, omega, p);
        rep.points.push_back(std::move(p));
        rep.residuals.push_back(r);
    }
    rep.max_abs = 0.0;
    rep.min_signed = rep.residuals.front();
    for (double r : rep.residuals) {
        rep.max_abs = std::max(rep.max_abs, std::abs(r));
        rep.min_signed = std::min(rep.min_signed, r);
    }
    rep.pass = rep.max_abs <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Curve-spec text format
//
//   curve affine            curve holopoly               curve composite
//   dims <n> <m>            dims 2 <2k>                  dims <n> <m>
//   A <m*n row-major>       component <re> <im> ...      pre <n*n> <n>
//   b <m>                   (one line per component)     post <m*mc> <m>
//                                                        core
//   curve complexexp                                     <nested block>
//   dims 2 2                                             endcore
// ---------------------------------------------------------------------------

namespace detail {

inline void append_numbers(std::string& out, const double* p, size_t count) {
    char buf[64];
    for (size_t i = 0; i < count; ++i) {
        std::snprintf(buf, sizeof buf, " %.17g", p[i]);
        out += buf;
    }
}

inline void serialize_curve_rec(const CurveModel& model, std::string& out) {
    struct V {
        const CurveModel& model;
        std::string& out;
        void operator()(const AffineMap& f) const {
            out += "curve affine\ndims " + std::to_string(model.domain_dim()) + " " +
                   std::to_string(model.target_dim()) + "\nA";
            append_numbers(out, f.a.a.data(), f.a.a.size());
            out += "\nb";
            append_numbers(out, f.b.data(), f.b.size());
            out += "\n";
        }
        void operator()(const HolomorphicPolynomial& f) const {
            out += "curve holopoly\ndims 2 " + std::to_string(model.target_dim()) + "\n";
            for (const auto& comp : f.components) {
                out += "component";
                for (const auto& c : comp) {
                    const double pair[2] = {c.real(), c.imag()};
                    append_numbers(out, pair, 2);
                }
                out += "\n";
            }
        }
        void operator()(const ComplexExp&) const { out += "curve complexexp\ndims 2 2\n"; }
        void operator()(const Composite& f) const {
            out += "curve composite\ndims " + std::to_string(model.domain_dim()) + " " +
                   std::to_string(model.target_dim()) + "\npre";
            append_numbers(out, f.pre.a.a.data(), f.pre.a.a.size());
            append_numbers(out, f.pre.b.data(), f.pre.b.size());
            out += "\npost";
            append_numbers(out, f.post.a.a.data(), f.post.a.a.size());
            append_numbers(out, f.post.b.data(), f.post.b.size());
            out += "\ncore\n";
            serialize_curve_rec(*f.core, out);
            out += "endcore\n";
        }
    };
    std::visit(V{model, out}, model.variant());
}

class CurveParser {
  public:
    explicit CurveParser(const std::string& text) : in_(text) {}

    CurveModel parse() {
        CurveModel m = parse_block();
        return m;
    }

  private:
    std::istringstream in_;
    int lineno_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("parse_curve: line " + std::to_string(lineno_) + ": " + msg);
    }

    std::string next_line() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line[0] != '#') return line;
        }
        fail("unexpected end of input");
    }

    std::vector<double> numbers_after(const std::string& line, const std::string& key,
                                      size_t expected) {
        if (line.rfind(key, 0) != 0) fail("expected '" + key + " ...'");
        std::istringstream ls(line.substr(key.size()));
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (vals.size() != expected)
            fail("expected " + std::to_string(expected) + " numbers after '" + key + "', got " +
                 std::to_string(vals.size()));
        return vals;
    }

    CurveModel parse_block() {
        std::string line = next_line();
        if (line.rfind("curve ", 0) != 0) fail("expected 'curve <variant>'");
        const std::string variant = line.substr(6);
        int n, m;
        {
            std::string dims = next_line();
            if (std::sscanf(dims.c_str(), "dims %d %d", &n, &m) != 2)
                fail("expected 'dims <n> <m>'");
        }
        if (variant == "affine") {
            const std::vector<double> av = numbers_after(next_line(), "A", static_cast<size_t>(m) * n);
            const std::vector<double> bv = numbers_after(next_line(), "b", m);
            Mat a(m, n);
            a.a = av;
            return affine_model(std::move(a), Vec(bv.begin(), bv.end()));
        }
        if (variant == "holopoly") {
            if (n != 2 || m % 2 != 0) fail("holopoly requires dims 2 <2k>");
            std::vector<std::vector<std::complex<double>>> comps;
            for (int c = 0; c < m / 2; ++c) {
                std::string line2 = next_line();
                if (line2.rfind("component", 0) != 0) fail("expected 'component ...'");
                std::istringstream ls(line2.substr(9));
                std::vector<double> vals;
                double v;
                while (ls >> v) vals.push_back(v);
                if (vals.empty() || vals.size() % 2 != 0)
                    fail("component coefficients must be nonempty real pairs");
                std::vector<std::complex<double>> comp;
                for (size_t i = 0; i < vals.size(); i += 2) comp.emplace_back(vals[i], vals[i + 1]);
                comps.push_back(std::move(comp));
            }
            return holomorphic_model(std::move(comps));
        }
        if (variant == "complexexp") {
            if (n != 2 || m != 2) fail("complexexp requires dims 2 2");
            return complex_exp_model();
        }
        if (variant == "composite") {
            std::vector<double> pv =
                numbers_after(next_line(), "pre", static_cast<size_t>(n) * n + n);
            std::string post_line = next_line();
            // post width depends on the core target; defer splitting
            CurveModel core = [&] {
                std::string core_kw = next_line();
                if (core_kw != "core") fail("expected 'core'");
                CurveModel c = parse_block();
                std::string end_kw = next_line();
                if (end_kw != "endcore") fail("expected 'endcore'");
                return c;
            }();
            const int mc = core.target_dim();
            std::vector<double> qv =
                numbers_after(post_line, "post", static_cast<size_t>(m) * mc + m);
            Mat pa(n, n);
            std::copy(pv.begin(), pv.begin() + static_cast<size_t>(n) * n, pa.a.begin());
            Vec pb(pv.end() - n, pv.end());
            Mat qa(m, mc);
            std::copy(qv.begin(), qv.begin() + static_cast<size_t>(m) * mc, qa.a.begin());
            Vec qb(qv.end() - m, qv.end());
            return composite_model(AffineMap(std::move(pa), std::move(pb)), std::move(core),
                                   AffineMap(std::move(qa), std::move(qb)));
        }
        fail("unknown curve variant '" + variant + "'");
    }
};

}  // namespace detail

inline std::string serialize_curve(const CurveModel& model) {
    std::string out;
    detail::serialize_curve_rec(model, out);
    return out;
}

inline CurveModel parse_curve(const std::string& text) {
    return detail::CurveParser(text).parse();
}

}  // namespace confcurve
