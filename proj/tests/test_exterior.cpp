#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "confcurve/confcurve.hpp"
#include "oracles.hpp"

using namespace confcurve;

namespace {

AlternatingForm random_form(int degree, int ambient, RandomStream& rs) {
    AlternatingForm f(degree, ambient);
    for (const MultiIndex& i : all_multi_indices(degree, ambient))
        if (rs.uniform01() < 0.6) f.add(i, rs.gaussian());
    if (f.is_zero()) f.add(all_multi_indices(degree, ambient).front(), 1.0);
    return f;
}

}  // namespace

TEST_CASE("multi-index validation", "[exterior]") {
    CHECK_NOTHROW(MultiIndex({1, 3, 4}, 5));
    CHECK_NOTHROW(MultiIndex({}, 3));  // scalar unit
    CHECK_THROWS_AS(MultiIndex({3, 1}, 5), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex({1, 1}, 5), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex({0, 2}, 5), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex({2, 6}, 5), std::invalid_argument);
    CHECK(MultiIndex({2, 3}, 4).complement() == MultiIndex({1, 4}, 4));
}

TEST_CASE("wedge basis cases", "[exterior]") {
    const auto dx1 = AlternatingForm::basis({1}, 4);
    const auto dx2 = AlternatingForm::basis({2}, 4);

    const auto w12 = wedge(dx1, dx2);
    CHECK(w12.coefficient(MultiIndex({1, 2}, 4)) == 1.0);
    CHECK(w12.coefficients().size() == 1);

    const auto w21 = wedge(dx2, dx1);
    CHECK(w21.coefficient(MultiIndex({1, 2}, 4)) == -1.0);

    CHECK(wedge(dx1, dx1).is_zero());

    // degree overflow: zero form of the declared (degenerate) degree
    const auto top = volume_form(4);
    const auto over = wedge(top, dx1);
    CHECK(over.is_zero());
    CHECK(over.degree() == 5);
    CHECK(over.degenerate_degree());

    AlternatingForm other(1, 5);
    other.add(MultiIndex({1}, 5), 1.0);
    CHECK_THROWS_AS(wedge(dx1, other), std::invalid_argument);
}

TEST_CASE("wedge is associative and graded-anticommutative", "[exterior]") {
    // exact equality on basis monomials
    for (int d = 2; d <= 6; ++d)
        for (int p = 1; p < d; ++p)
            for (int q = 1; p + q <= d; ++q)
                for (const MultiIndex& a : all_multi_indices(p, d))
                    for (const MultiIndex& b : all_multi_indices(q, d)) {
                        const auto fa = AlternatingForm::basis(a.axes(), d);
                        const auto fb = AlternatingForm::basis(b.axes(), d);
                        const auto ab = wedge(fa, fb);
                        const auto ba = wedge(fb, fa);
                        const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
                        CHECK(ab.equals(sign * ba, 0.0));
                    }

    RandomStream rs(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 3 + static_cast<int>(rs.uniform01() * 4);  // 3..6
        const int p = 1 + static_cast<int>(rs.uniform01() * 2);
        const int q = 1 + static_cast<int>(rs.uniform01() * 2);
        const int s = 1 + static_cast<int>(rs.uniform01() * 2);
        const auto a = random_form(p, d, rs);
        const auto b = random_form(q, d, rs);
        const auto c = random_form(s, d, rs);
        CHECK(wedge(wedge(a, b), c).equals(wedge(a, wedge(b, c)), 1e-12));
        const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
        CHECK(wedge(a, b).equals(sign * wedge(b, a), 1e-12));
    }
}

TEST_CASE("hodge star basis cases", "[exterior]") {
    // top form goes to the scalar 1
    for (int d = 1; d <= 6; ++d) {
        const auto star_top = hodge_star(volume_form(d));
        CHECK(star_top.degree() == 0);
        CHECK(scalar_part(star_top) == 1.0);
    }

    const auto star_dx1 = hodge_star(AlternatingForm::basis({1}, 3));
    CHECK(star_dx1.coefficient(MultiIndex({2, 3}, 3)) == 1.0);

    const auto star_dx2 = hodge_star(AlternatingForm::basis({2}, 3));
    CHECK(star_dx2.coefficient(MultiIndex({1, 3}, 3)) == -1.0);
}

TEST_CASE("hodge star applied twice is (-1)^{k(d-k)}", "[exterior]") {
    RandomStream rs(7);
    for (int d = 1; d <= 6; ++d)
        for (int k = 0; k <= d; ++k) {
            const auto a = random_form(k, d, rs);
            const auto twice = hodge_star(hodge_star(a));
            const double sign = (k * (d - k)) % 2 == 0 ? 1.0 : -1.0;
            CHECK(twice.equals(sign * a, 0.0));  // sign flips are exact
        }
}

TEST_CASE("evaluate on frames", "[exterior]") {
    const auto vol3 = volume_form(3);
    CHECK(evaluate(vol3, Frame::standard_basis(3, {1, 2, 3})) == 1.0);
    CHECK(evaluate(vol3, Frame::standard_basis(3, {2, 1, 3})) == -1.0);

    // (dx12 + dx34) on (e1, (e2+e4)/sqrt2) -> 1/sqrt2 by expanding the two minors
    AlternatingForm f(2, 4);
    f.add(MultiIndex({1, 2}, 4), 1.0);
    f.add(MultiIndex({3, 4}, 4), 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Frame fr({Vec{1, 0, 0, 0}, Vec{0, inv_sqrt2, 0, inv_sqrt2}});
    CHECK_THAT(evaluate(f, fr), Catch::Matchers::WithinAbs(inv_sqrt2, 1e-15));

    CHECK_THROWS_AS(evaluate(vol3, Frame::standard_basis(4, {1, 2, 3})), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(vol3, Frame::standard_basis(3, {1, 2})), std::invalid_argument);
}

TEST_CASE("evaluate is invariant under simultaneous rotation", "[exterior]") {
    RandomStream rs(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 4 + static_cast<int>(rs.uniform01() * 3);  // 4..6
        const int n = 2 + static_cast<int>(rs.uniform01() * 2);  // 2..3
        const auto omega = random_form(n, m, rs);
        const Mat r = random_rotation(m, rs);
        const Mat v = random_orthonormal_columns(m, n, rs);
        // (R^*omega)(v) == omega(R v)
        const double lhs = pullback_top(pullback_form(omega, r), v);
        const double rhs = pullback_top(omega, matmul(r, v));
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-12));
    }
}

TEST_CASE("pullback_top against brute-force minor expansion", "[exterior]") {
    const auto catalog_forms = std::vector<AlternatingForm>{
        volume_form(2),  volume_form(3),       volume_form(4),
        symplectic_form(2), symplectic_form(3), symplectic_form(4),
        kahler_power_form(3, 2), kahler_power_form(4, 2),
        special_lagrangian_form(2, 0.0), special_lagrangian_form(3, 0.7),
        special_lagrangian_form(4, 0.0), associative_form(), cayley_form()};
    RandomStream rs(5);
    for (const auto& omega : catalog_forms) {
        REQUIRE(omega.ambient() <= 8);
        REQUIRE(omega.degree() <= 4);
        for (int trial = 0; trial < 5; ++trial) {
            const Mat j = rs.gaussian_mat(omega.ambient(), omega.degree());
            const double got = pullback_top(omega, j);
            const double want = oracles::brute_pullback(omega, j);
            CHECK_THAT(got, Catch::Matchers::WithinAbs(want, 1e-12));
        }
    }
}

TEST_CASE("pullback_top basic cases", "[exterior]") {
    CHECK(pullback_top(volume_form(3), Mat::identity(3)) == 1.0);

    // z -> z^2 at z: Jacobian determinant 4|z|^2
    RandomStream rs(11);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = rs.gaussian(), b = rs.gaussian();  // f'(z) = 2z = 2a + 2bi
        Mat j(2, 2);
        j(0, 0) = 2 * a;
        j(0, 1) = -2 * b;
        j(1, 0) = 2 * b;
        j(1, 1) = 2 * a;
        CHECK_THAT(pullback_top(volume_form(2), j),
                   Catch::Matchers::WithinRel(4.0 * (a * a + b * b), 1e-14));
    }

    // columns e1, e2, e4 of R^5: the (1,2,3) minor vanishes
    Mat cols(5, 3);
    cols(0, 0) = 1.0;
    cols(1, 1) = 1.0;
    cols(3, 2) = 1.0;
    CHECK(pullback_top(AlternatingForm::basis({1, 2, 3}, 5), cols) == 0.0);

    CHECK_THROWS_AS(pullback_top(volume_form(3), Mat::identity(2)), std::invalid_argument);
}

TEST_CASE("form serialization round-trips bit-exactly", "[exterior]") {
    RandomStream rs(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(rs.uniform01() * 5);
        const int k = 1 + static_cast<int>(rs.uniform01() * std::min(d, 4));
        const auto f = random_form(k, d, rs);
        const auto back = parse_form(serialize_form(f));
        REQUIRE(back.degree() == f.degree());
        REQUIRE(back.ambient() == f.ambient());
        CHECK(back.equals(f, 0.0));  // bit-exact
    }

    const auto parsed = parse_form("form degree=2 ambient=4\n1 2  1\n3 4  -0.25\n");
    CHECK(parsed.coefficient(MultiIndex({1, 2}, 4)) == 1.0);
    CHECK(parsed.coefficient(MultiIndex({3, 4}, 4)) == -0.25);

    CHECK_THROWS(parse_form("degree=2\n"));
    CHECK_THROWS(parse_form("form degree=2 ambient=4\n1 1  3\n"));
}
