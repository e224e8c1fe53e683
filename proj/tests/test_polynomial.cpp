#include <doctest.h>

#include <cmath>

#include "ddae/chebyshev.hpp"
#include "ddae/errors.hpp"
#include "support.hpp"

using namespace ddae;
using namespace ddae::test;

TEST_CASE("evaluation and derivatives of a cubic piece")
{
    // p(t) = 1 + 2(t-1) + 3(t-1)^3 on [1, 2]
    const auto p = poly(1.0, 2.0, {{1.0}, {2.0}, {0.0}, {3.0}});
    CHECK(p.evaluate(1.5)(0) == doctest::Approx(1 + 2 * 0.5 + 3 * 0.125));
    CHECK(p.evaluate(1.5, 1)(0) == doctest::Approx(2 + 9 * 0.25));
    CHECK(p.evaluate(1.5, 2)(0) == doctest::Approx(18 * 0.5));
    CHECK(p.evaluate(1.5, 3)(0) == doctest::Approx(18.0));
    CHECK(p.evaluate(1.5, 4)(0) == 0.0);
    CHECK(p.derivative(2).evaluate(2.0)(0) == doctest::Approx(18.0));
    CHECK(p.degree() == 3);
    CHECK_THROWS_AS(p.evaluate(2.5), OutOfDomain);
}

TEST_CASE("one-sided evaluation at an interior knot")
{
    std::vector<PiecewisePolynomial<double>::Piece> pieces{
        {0.0, 1.0, {vec({0.0}), vec({1.0})}},
        {1.0, 2.0, {vec({5.0})}}};
    const PiecewisePolynomial<double> p(pieces, 1);
    CHECK(p.evaluate(1.0, 0, Side::Left)(0) == doctest::Approx(1.0));
    CHECK(p.evaluate(1.0, 0, Side::Right)(0) == doctest::Approx(5.0));
    CHECK(p.evaluate(1.0, 1, Side::Left)(0) == doctest::Approx(1.0));
    CHECK(p.evaluate(1.0, 1, Side::Right)(0) == 0.0);
    CHECK(p.breakpoints() == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("construction rejects gaps and bad sizes")
{
    using Piece = PiecewisePolynomial<double>::Piece;
    CHECK_THROWS_AS(PiecewisePolynomial<double>({Piece{0.0, 1.0, {vec({1.0})}},
                                                 Piece{1.5, 2.0, {vec({1.0})}}},
                                                1),
                    MalformedInput);
    CHECK_THROWS_AS(PiecewisePolynomial<double>({Piece{0.0, 1.0, {vec({1.0, 2.0})}}}, 1),
                    MalformedInput);
    CHECK_THROWS_AS(PiecewisePolynomial<double>({Piece{1.0, 1.0, {vec({1.0})}}}, 1),
                    MalformedInput);
}

TEST_CASE("shift, restriction, refinement and sums keep the function")
{
    const auto p = poly(0.0, 2.0, {{1.0, 0.0}, {-1.0, 2.0}, {0.5, 1.0}});
    const auto s = p.shifted(3.0);
    CHECK(s.start() == 3.0);
    CHECK((s.evaluate(4.2) - p.evaluate(1.2)).norm() < 1e-14);

    const auto r = p.restricted(0.5, 1.5);
    CHECK((r.evaluate(0.7, 1) - p.evaluate(0.7, 1)).norm() < 1e-14);

    const auto f = p.refined({0.3, 1.1});
    CHECK(f.pieces().size() == 3);
    for (double t : {0.0, 0.3, 0.9, 1.1, 1.7, 2.0})
        CHECK((f.evaluate(t, 1) - p.evaluate(t, 1)).norm() < 1e-13);

    const auto q = poly(0.0, 2.0, {{2.0, 2.0}});
    CHECK(((p + q).evaluate(1.0) - p.evaluate(1.0) - vec({2.0, 2.0})).norm() < 1e-14);
    CHECK(((p - p).evaluate(1.3)).norm() == 0.0);

    const auto m = p.transformed(mat({{0, 1}, {1, 0}}));
    CHECK(m.evaluate(1.0)(0) == doctest::Approx(p.evaluate(1.0)(1)));
}

TEST_CASE("taylor shift against direct expansion")
{
    // (s + 2)^2 = 4 + 4 s + s^2
    const auto c = taylor_shift<double>({vec({0.0}), vec({0.0}), vec({1.0})}, 2.0);
    REQUIRE(c.size() == 3);
    CHECK(c[0](0) == doctest::Approx(4.0));
    CHECK(c[1](0) == doctest::Approx(4.0));
    CHECK(c[2](0) == doctest::Approx(1.0));
}

TEST_CASE("merge_knots drops near duplicates")
{
    const auto k = merge_knots({0.0, 0.5, 1.0}, {0.5 + 1e-15, 0.75}, 1e-12);
    CHECK(k.size() == 4);
}

TEST_CASE("Lobatto nodes are ascending and symmetric")
{
    const auto y = cgl_nodes(6);
    REQUIRE(y.size() == 7);
    CHECK(y.front() == doctest::Approx(-1.0));
    CHECK(y.back() == doctest::Approx(1.0));
    for (std::size_t j = 0; j + 1 < y.size(); ++j)
        CHECK(y[j] < y[j + 1]);
    CHECK(std::abs(y[3]) < 1e-15);
}

TEST_CASE("interpolation is exact for polynomials and derivatives match monomial oracle")
{
    // x(t) = t^4 - 2 t on [0.5, 1.5]
    const auto piece = cheb_interpolate<double>(0.5, 1.5, 12, 1,
                                                [](double t) { return vec({t * t * t * t - 2 * t}); });
    for (double t : {0.5, 0.8, 1.1, 1.5})
    {
        CHECK(piece.evaluate(t)(0) == doctest::Approx(t * t * t * t - 2 * t).epsilon(1e-13));
        CHECK(piece.evaluate(t, 1)(0) == doctest::Approx(4 * t * t * t - 2).epsilon(1e-12));
        CHECK(piece.evaluate(t, 2)(0) == doctest::Approx(12 * t * t).epsilon(1e-11));
        CHECK(piece.evaluate(t, 4)(0) == doctest::Approx(24.0).epsilon(1e-9));
    }
    auto chopped = piece;
    chop(chopped, 1e-13);
    CHECK(chopped.degree() == 4);
}

TEST_CASE("integration matrix inverts differentiation up to the constant")
{
    const int p = 10;
    const Matrix<double> K = cheb_integration_matrix(p);
    Matrix<double> c = Matrix<double>::Zero(1, p + 1);
    c(0, 3) = 1.0; // T_3
    const Matrix<double> integral = c * K.transpose();
    const Matrix<double> back = cheb_derivative<double>(integral);
    CHECK((back.leftCols(p + 1) - c).norm() < 1e-13);
    // zero at y = -1
    ChebPiece<double> piece{-1.0, 1.0, integral};
    CHECK(std::abs(piece.evaluate(-1.0)(0)) < 1e-14);
}

TEST_CASE("conversion from the monomial basis is exact")
{
    const auto p = poly(-1.0, 0.0, {{1.0}, {0.0}, {-3.0}, {2.0}});
    const auto c = cheb_from_polynomial(p, 0, -1.0, 0.0);
    for (double t : {-1.0, -0.6, -0.1, 0.0})
    {
        CHECK(c.evaluate(t)(0) == doctest::Approx(p.evaluate(t)(0)).epsilon(1e-14));
        CHECK(c.evaluate(t, 2)(0) == doctest::Approx(p.evaluate(t, 2)(0)).epsilon(1e-12));
    }
}

TEST_CASE("complex coefficients")
{
    Vector<Complex> c0(1), c1(1);
    c0 << Complex(1, 2);
    c1 << Complex(0, -1);
    const auto p = PiecewisePolynomial<Complex>::single(0.0, 1.0, {c0, c1});
    CHECK(std::abs(p.evaluate(0.5)(0) - Complex(1, 1.5)) < 1e-15);
    CHECK(std::abs(p.evaluate(0.5, 1)(0) - Complex(0, -1)) < 1e-15);
}
