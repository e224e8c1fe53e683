#include <doctest.h>

#include "ddae/errors.hpp"
#include "ddae/history.hpp"
#include "support.hpp"

using namespace ddae;
using namespace ddae::test;

TEST_CASE("admissibility of the reference histories")
{
    for (const auto& sys : {algebraic_scalar(), index_two(), smoothing_pair()})
        CHECK(check_admissible(sys, build_split(sys)).satisfied);
}

TEST_CASE("perturbing the fast value breaks admissibility")
{
    const auto base = index_two();
    const auto phi = base.phi() + PiecewisePolynomial<double>::constant(-1.0, 0.0, vec({1.0, 0.0}));
    const auto sys = base.with_history(phi);
    const auto c = check_admissible(sys, build_split(sys));
    CHECK_FALSE(c.satisfied);
    CHECK(c.residual > c.threshold);
}

TEST_CASE("smoothness conditions fail for the smoothing example history")
{
    const auto sys = smoothing_pair();
    const auto split = build_split(sys);
    CHECK_FALSE(check_smoothness_condition(sys, split).satisfied);
    CHECK_FALSE(check_second_splicing(sys, split).satisfied);
    CHECK(kappa_observed(sys, split) == 0);
}

TEST_CASE("first-segment derivatives of the index-two example")
{
    // x2 = t^2 - 1 and x1 = phi2(t - 1) on [0, 1]
    const auto sys = index_two();
    const auto d = first_segment_derivatives(sys, build_split(sys), 3);
    REQUIRE(d.size() == 4);
    CHECK(d[0](1) == doctest::Approx(-1.0));
    CHECK(std::abs(d[1](1)) < 1e-12);
    CHECK(d[2](1) == doctest::Approx(2.0));
    CHECK(std::abs(d[3](1)) < 1e-12);
    // phi2 = t^3/3 + t^2 - 1 agrees through order 2, differs at order 3
    CHECK(kappa_observed(sys, build_split(sys)) == 2);
    const auto r = splicing_report(sys, build_split(sys));
    CHECK(r.smooth_c1.satisfied);
    CHECK(r.smooth_c2.satisfied);
}

TEST_CASE("index-three uniqueness conditions")
{
    const auto r = check_index3_uniqueness(build_split(index_two()));
    CHECK(r.index_at_most_3);
    CHECK_FALSE(r.n_b_a2_zero);
    CHECK_FALSE(r.applicable);

    const auto s = check_index3_uniqueness(build_split(smoothing_pair()));
    CHECK(s.applicable);
}

TEST_CASE("two-point Hermite data are reproduced")
{
    const double h = 0.7;
    std::vector<Vec> left{vec({1.0}), vec({-2.0}), vec({0.5})};
    std::vector<Vec> right{vec({3.0}), vec({0.0}), vec({4.0})};
    const auto c = hermite_two_point<double>(h, left, right);
    const auto p = PiecewisePolynomial<double>::single(0.0, h, c);
    for (int j = 0; j < 3; ++j)
    {
        CHECK(p.evaluate(0.0, j)(0) == doctest::Approx(left[j](0)).epsilon(1e-12));
        CHECK(p.evaluate(h, j)(0) == doctest::Approx(right[j](0)).epsilon(1e-12));
    }
}

TEST_CASE("probe history matches the solution below the target order")
{
    const auto sys = smoothing_pair();
    const auto split = build_split(sys);
    for (int m = 1; m <= 3; ++m)
    {
        const auto phi = construct_probe_history(split, m, vec({1.0}), ProbeSide::Slow);
        const auto probe = sys.with_history(phi);
        const auto ps = build_split(probe);
        const auto x = first_segment_derivatives(probe, ps, m);
        CAPTURE(m);
        for (int j = 0; j < m; ++j)
            CHECK((phi.evaluate(0.0, j) - x[j]).norm() < 1e-9);
        const Vec z = ps.qwf.T_inv * (phi.evaluate(0.0, m) - x[m]);
        CHECK(z(0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(z(1)) < 1e-8);
        CHECK(check_admissible(probe, ps).satisfied);
    }
}

TEST_CASE("probe argument checks")
{
    const auto split = build_split(smoothing_pair());
    CHECK_THROWS_AS(construct_probe_history(split, 0, vec({1.0}), ProbeSide::Slow), MalformedInput);
    CHECK_THROWS_AS(construct_probe_history(split, 10, vec({1.0}), ProbeSide::Slow), MalformedInput);
    CHECK_THROWS_AS(construct_probe_history(split, 1, vec({1.0, 2.0}), ProbeSide::Fast),
                    DimensionMismatch);
}

TEST_CASE("seeded probes differ but keep the contract")
{
    const auto sys = smoothing_pair();
    const auto split = build_split(sys);
    ProbeOptions a, b;
    a.seed = 1;
    b.seed = 2;
    const auto pa = construct_probe_history(split, 2, vec({0.5}), ProbeSide::Fast, a);
    const auto pb = construct_probe_history(split, 2, vec({0.5}), ProbeSide::Fast, b);
    CHECK((pa.evaluate(-0.5) - pb.evaluate(-0.5)).norm() > 1e-6);
    for (const auto& phi : {pa, pb})
    {
        const auto probe = sys.with_history(phi);
        const auto ps = build_split(probe);
        const auto x = first_segment_derivatives(probe, ps, 2);
        const Vec z = ps.qwf.T_inv * (phi.evaluate(0.0, 2) - x[2]);
        CHECK(std::abs(z(0)) < 1e-8);
        CHECK(z(1) == doctest::Approx(0.5).epsilon(1e-8));
    }
}
