#include <doctest.h>

#include <Eigen/LU>

#include "ddae/classification.hpp"
#include "ddae/errors.hpp"
#include "ddae/history.hpp"
#include "ddae/reformulation.hpp"
#include "support.hpp"

using namespace ddae;
using namespace ddae::test;

namespace
{

template <typename Scalar>
double slow_mismatch(const DdaeSystem<Scalar>& sys, const SolverConfig& config = {})
{
    const auto split = build_split(sys);
    const auto expansion = expand_hidden_delays(split, sys.horizon_intervals());
    const auto direct = method_of_steps(sys, split, config);
    REQUIRE(direct.completed);
    const auto hidden = solve_hidden_delay_dde(expansion, sys, split, config);
    const Matrix<Scalar> to_slow = split.qwf.T_inv.topRows(split.n_d());
    double worst = 0.0, scale = 0.0;
    for (int i = expansion.nu_D; i < sys.horizon_intervals(); ++i)
        for (int j = 0; j <= 20; ++j)
        {
            const double t = (i + j / 20.0) * sys.tau();
            const Vector<Scalar> v = to_slow * direct.trajectory.evaluate(t, 0, Side::Left);
            worst = std::max(worst, (v - hidden.evaluate(t, 0, Side::Left)).norm());
            scale = std::max(scale, v.norm());
        }
    return worst / (1.0 + scale);
}

// det(lambda I - J - sum_k D_k exp(-(k+1) lambda tau))
Complex multi_delay_char(const Mat& J, const std::vector<Mat>& D, double tau, Complex lambda)
{
    Matrix<Complex> M = lambda * Matrix<Complex>::Identity(J.rows(), J.cols()) - J.cast<Complex>();
    for (std::size_t k = 0; k < D.size(); ++k)
        M -= std::exp(-double(k + 1) * lambda * tau) * D[k].cast<Complex>();
    return M.determinant();
}

} // namespace

TEST_CASE("hidden delay of the smoothing example is z' = z(t - 2)")
{
    const auto split = build_split(smoothing_pair());
    const auto e = expand_hidden_delays(split, 4);
    CHECK(e.nu_D == 1);
    REQUIRE(e.D.size() == 2);
    CHECK(std::abs(e.J(0, 0)) <= 1e-12);
    CHECK(std::abs(e.D[0](0, 0)) <= 1e-12);
    CHECK(std::abs(e.D[1](0, 0) - 1.0) <= 1e-12);
    CHECK(e.delays() == std::vector<double>{1.0, 2.0});
    CHECK(e.theta.evaluate(2.5).norm() == 0.0);
}

TEST_CASE("expansion is refused for non-smoothing systems")
{
    CHECK_THROWS_AS(expand_hidden_delays(build_split(algebraic_scalar()), 4), NotSmoothingType);
    CHECK_THROWS_AS(expand_hidden_delays(build_split(index_two()), 4), NotSmoothingType);
}

TEST_CASE("multi-delay solve reproduces the direct method of steps")
{
    CHECK(slow_mismatch(smoothing_pair()) <= 1e-10);
    CHECK(slow_mismatch(scalar_retarded()) <= 1e-10);
}

TEST_CASE("property: equivalence on random smoothing systems with forcing")
{
    Rng rng(7);
    for (int trial = 0; trial < 8; ++trial)
    {
        const int n_d = rng.integer(1, 2);
        const int n_a = rng.integer(1, 3);
        const auto blocks = random_blocks(rng, n_a, 2);
        const auto c = construct(rng, 0.5 * rng.normal(n_d, n_d), jordan_nilpotent(blocks),
                                 0.5 * rng.normal(n_d, n_d + n_a), smoothing_b_a(rng, blocks, n_d),
                                 max_block(blocks));
        const Index n = n_d + n_a;
        const auto f = PiecewisePolynomial<double>::single(0.0, 4.0, {rng.normal(n, 1), rng.normal(n, 1)});
        const DdaeSystem<double> plain(c.E, c.A, c.D, 1.0, 4, f, PiecewisePolynomial<double>::zero(-1, 0, n));
        ProbeOptions seeded;
        seeded.seed = 100 + trial;
        const auto phi = construct_probe_history(build_split(plain), 1, rng.unit(n_d), ProbeSide::Slow, seeded);
        CAPTURE(trial);
        CHECK(slow_mismatch(plain.with_history(phi)) <= 1e-8);
    }
}

TEST_CASE("neutral DDE embedding solves the neutral equation")
{
    // x' = -x + x'(t - 1) / 2, x = t on [-1, 0]; y(t) = x(t - 1)
    const auto sys = embed_neutral_dde<double>(mat({{-1.0}}), mat({{0.0}}), mat({{0.5}}), 1.0, 1,
                                               poly(0.0, 1.0, {{0.0}}),
                                               poly(-1.0, 0.0, {{-1.0, -2.0}, {1.0, 1.0}}));
    const auto split = build_split(sys);
    const auto cls = classify(split, 1);
    CHECK(cls.legacy.kind == LegacyKind::Neutral);
    CHECK(cls.propagation.kind == PropagationKind::DiscontinuityInvariant);
    const auto r = method_of_steps(sys, split);
    REQUIRE(r.completed);
    for (double t : {0.0, 0.25, 0.5, 1.0})
    {
        CHECK(r.trajectory.evaluate(t, 0, Side::Left)(0) ==
              doctest::Approx(0.5 - 0.5 * std::exp(-t)).epsilon(1e-12));
        CHECK(r.trajectory.evaluate(t, 0, Side::Left)(1) == doctest::Approx(t - 1).epsilon(1e-12));
    }
}

TEST_CASE("hidden delays of a neutral DDE with nilpotent B follow (D + A B) B^k")
{
    Rng rng(3);
    const Mat A = rng.normal(2, 2), D = rng.normal(2, 2);
    const Mat B = mat({{0.0, 0.7}, {0.0, 0.0}});
    const auto sys = embed_neutral_dde<double>(A, D, B, 1.0, 4, PiecewisePolynomial<double>::zero(0, 4, 2));
    const auto e = expand_hidden_delays(build_split(sys), 4);
    REQUIRE(e.nu_D == 2);
    REQUIRE(e.J.rows() == 2);
    std::vector<Mat> expected{D + A * B, (D + A * B) * B, (D + A * B) * B * B};
    std::vector<Mat> got;
    for (const auto& m : e.D)
        got.push_back(m);
    for (Complex lambda : {Complex(0.3, 0.2), Complex(-1.0, 2.0), Complex(1.5, -0.5)})
    {
        const Complex a = multi_delay_char(e.J, got, 1.0, lambda);
        const Complex b = multi_delay_char(A, expected, 1.0, lambda);
        CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(b)));
    }
}

TEST_CASE("pure delay equations")
{
    SUBCASE("no derivative term: x = x(t - 1) / 2 carries jumps unchanged")
    {
        // x = t - 1 on [-1, 0], so x(0) = x(-1) / 2 holds
        const auto sys = embed_pure_delay<double>(mat({{0.5}}), mat({{0.0}}), 1.0, 3,
                                                  poly(0.0, 3.0, {{0.0}}),
                                                  poly(-1.0, 0.0, {{-2.0, -3.0}, {1.0, 1.0}}));
        const auto split = build_split(sys);
        CHECK(classify_propagation(split, 3).kind == PropagationKind::DiscontinuityInvariant);
        const auto r = method_of_steps(sys, split);
        REQUIRE(r.completed);
        CHECK(r.trajectory.evaluate(0.5, 0)(0) == doctest::Approx(0.5 * (0.5 - 2)).epsilon(1e-13));
        CHECK(r.trajectory.evaluate(1.5, 0)(0) == doctest::Approx(0.25 * (0.5 - 2)).epsilon(1e-13));
    }
    SUBCASE("nilpotent coupling: smoothing")
    {
        const auto sys = embed_pure_delay<double>(mat({{0.0, 1.0}, {0.0, 0.0}}), Mat::Zero(2, 2), 1.0, 5,
                                                  PiecewisePolynomial<double>::zero(0, 5, 2));
        const auto split = build_split(sys);
        const auto cls = classify_propagation(split, 5);
        CHECK(cls.kind == PropagationKind::Smoothing);
        CHECK(cls.nu_D == 3);
        CHECK(classify_propagation(split, 3).kind == PropagationKind::DiscontinuityInvariant);
    }
    SUBCASE("derivative term: de-smoothing")
    {
        const auto sys = embed_pure_delay<double>(mat({{0.5}}), mat({{1.0}}), 1.0, 3,
                                                  poly(0.0, 3.0, {{0.0}}));
        CHECK(classify_propagation(build_split(sys), 3).kind == PropagationKind::DeSmoothing);
    }
    CHECK_THROWS_AS(embed_pure_delay<double>(mat({{0.5}}), Mat::Zero(2, 2), 1.0, 3, poly(0.0, 3.0, {{0.0}})),
                    DimensionMismatch);
}
