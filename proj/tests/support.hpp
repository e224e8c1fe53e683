#ifndef DDAE_TESTS_SUPPORT_HPP
#define DDAE_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>

#include "ddae/model.hpp"

namespace ddae::test
{

using Mat = Matrix<double>;
using Vec = Vector<double>;

inline Mat mat(std::initializer_list<std::initializer_list<double>> rows)
{
    Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& row : rows)
    {
        Index j = 0;
        for (double v : row)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

inline Vec vec(std::initializer_list<double> values)
{
    Vec v(static_cast<Index>(values.size()));
    Index i = 0;
    for (double x : values)
        v(i++) = x;
    return v;
}

/// Single piece on [a, b]; coeffs[j] multiplies (t - a)^j.
inline PiecewisePolynomial<double> poly(double a, double b,
                                        std::initializer_list<std::initializer_list<double>> coeffs)
{
    std::vector<Vec> c;
    for (const auto& v : coeffs)
        c.push_back(vec(v));
    return PiecewisePolynomial<double>::single(a, b, c);
}

// Reference systems, tau = 1.

inline DdaeSystem<double> algebraic_scalar(int M = 4)
{
    return DdaeSystem<double>(mat({{0.0}}), mat({{1.0}}), mat({{1.0}}), 1.0, M,
                              poly(0.0, M, {{1.0}}), poly(-1.0, 0.0, {{-1.0}, {1.0}}));
}

/// History ((t-1)^3/3 + (t-1)^2 - 1, t^3/3 + t^2 - 1) expanded in s = t + 1.
inline DdaeSystem<double> index_two(int M = 4)
{
    return DdaeSystem<double>(mat({{1, 0}, {0, 0}}), mat({{0, 1}, {1, 0}}),
                              mat({{0, 0}, {0, -1}}), 1.0, M, poly(0.0, M, {{0, 0}}),
                              poly(-1.0, 0.0,
                                   {{1.0 / 3, -1.0 / 3}, {0, -1}, {-1, 0}, {1.0 / 3, 1.0 / 3}}));
}

inline DdaeSystem<double> smoothing_pair(int M = 4)
{
    return DdaeSystem<double>(mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}}),
                              mat({{0, 1}, {-1, 0}}), 1.0, M, poly(0.0, M, {{0, 0}}),
                              poly(-1.0, 0.0, {{-1, -1}, {1, 0}}));
}

inline DdaeSystem<double> nilpotent_pair(int M = 3)
{
    return DdaeSystem<double>(mat({{0, 1}, {0, 0}}), mat({{1, 0}, {0, 1}}),
                              mat({{1, 1}, {0, 1}}), 1.0, M, poly(0.0, M, {{0, 0}}),
                              poly(-1.0, 0.0, {{0, 0}}));
}

/// x' = -2x + x(t - 1), phi = 1.
inline DdaeSystem<double> scalar_retarded(int M = 5)
{
    return DdaeSystem<double>(mat({{1.0}}), mat({{-2.0}}), mat({{1.0}}), 1.0, M,
                              poly(0.0, M, {{0.0}}), poly(-1.0, 0.0, {{1.0}}));
}

struct Rng
{
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    Mat normal(Index r, Index c)
    {
        Mat m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j)
                m(i, j) = normal();
        return m;
    }
    Vec unit(Index n)
    {
        Vec v = normal(n, 1);
        return v / v.norm();
    }
    /// U diag(s) V^T with s in [0.5, 2]: condition number at most 4.
    Mat well_conditioned(Index n)
    {
        const Mat U = Eigen::HouseholderQR<Mat>(normal(n, n)).householderQ();
        const Mat V = Eigen::HouseholderQR<Mat>(normal(n, n)).householderQ();
        Vec s(n);
        for (Index i = 0; i < n; ++i)
            s(i) = uniform(0.5, 2.0);
        return U * s.asDiagonal() * V.transpose();
    }
};

inline int block_total(const std::vector<int>& blocks)
{
    int n = 0;
    for (int b : blocks)
        n += b;
    return n;
}

/// Nilpotent Jordan form with ones on the superdiagonal inside each block.
inline Mat jordan_nilpotent(const std::vector<int>& blocks)
{
    const int n = block_total(blocks);
    Mat N = Mat::Zero(n, n);
    int offset = 0;
    for (int b : blocks)
    {
        for (int k = 0; k + 1 < b; ++k)
            N(offset + k, offset + k + 1) = 1.0;
        offset += b;
    }
    return N;
}

/// Row indices spanning ker N for jordan_nilpotent(blocks).
inline std::vector<int> block_first_rows(const std::vector<int>& blocks)
{
    std::vector<int> rows;
    int offset = 0;
    for (int b : blocks)
    {
        rows.push_back(offset);
        offset += b;
    }
    return rows;
}

inline int max_block(const std::vector<int>& blocks)
{
    int m = 0;
    for (int b : blocks)
        m = std::max(m, b);
    return m;
}

/// E = P diag(I, N) Q, A = P diag(J, I) Q, D = P [B_d; B_a] Q.
struct Constructed
{
    Mat E, A, D;
    Mat P, Q;
    Index n_d = 0, n_a = 0;
    int nu = 0;
};

inline Constructed construct(Rng& rng, const Mat& J, const Mat& N, const Mat& B_d,
                             const Mat& B_a, int nu)
{
    const Index n_d = J.rows();
    const Index n_a = N.rows();
    const Index n = n_d + n_a;
    Constructed c;
    c.n_d = n_d;
    c.n_a = n_a;
    c.nu = nu;
    c.P = rng.well_conditioned(n);
    c.Q = rng.well_conditioned(n);
    Mat E0 = Mat::Zero(n, n), A0 = Mat::Zero(n, n), D0(n, n);
    E0.topLeftCorner(n_d, n_d).setIdentity();
    E0.bottomRightCorner(n_a, n_a) = N;
    A0.topLeftCorner(n_d, n_d) = J;
    A0.bottomRightCorner(n_a, n_a).setIdentity();
    D0.topRows(n_d) = B_d;
    D0.bottomRows(n_a) = B_a;
    c.E = c.P * E0 * c.Q;
    c.A = c.P * A0 * c.Q;
    c.D = c.P * D0 * c.Q;
    return c;
}

/// Random block sizes summing to n_a, each at most max_size.
inline std::vector<int> random_blocks(Rng& rng, int n_a, int max_size)
{
    std::vector<int> blocks;
    int left = n_a;
    while (left > 0)
    {
        const int b = rng.integer(1, std::min(left, max_size));
        blocks.push_back(b);
        left -= b;
    }
    return blocks;
}

/// Smoothing-type coupling: N B_a = 0 and B_a2 strictly upper triangular.
inline Mat smoothing_b_a(Rng& rng, const std::vector<int>& blocks, Index n_d)
{
    const Index n_a = block_total(blocks);
    Mat B_a = Mat::Zero(n_a, n_d + n_a);
    for (int r : block_first_rows(blocks))
    {
        for (Index c = 0; c < n_d; ++c)
            B_a(r, c) = rng.normal();
        for (Index c = r + 1; c < n_a; ++c)
            B_a(r, n_d + c) = rng.normal();
    }
    return B_a;
}

/// Real root of g in [a, b] by bisection; g(a) and g(b) must differ in sign.
inline double bisection(const std::function<double(double)>& g, double a, double b)
{
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it)
    {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm < 0) == (ga < 0))
        {
            a = m;
            ga = gm;
        }
        else
            b = m;
    }
    return 0.5 * (a + b);
}

} // namespace ddae::test

#endif
