#include "ddae/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddae/errors.hpp"

namespace ddae
{

std::vector<double> cgl_nodes(int p)
{
    if (p == 0)
        return {0.0};
    std::vector<double> y(p + 1);
    for (int j = 0; j <= p; ++j)
        y[j] = -std::cos(std::numbers::pi * j / p);
    // Symmetric nodes exactly.
    for (int j = 0; j <= p / 2; ++j)
    {
        const double m = 0.5 * (y[p - j] - y[j]);
        y[j] = -m;
        y[p - j] = m;
    }
    return y;
}

template <typename Scalar>
Matrix<Scalar> values_to_coeffs(const Matrix<Scalar>& values)
{
    const int p = static_cast<int>(values.cols()) - 1;
    if (p == 0)
        return values;
    Matrix<double> W(p + 1, p + 1);
    for (int j = 0; j <= p; ++j)
    {
        for (int k = 0; k <= p; ++k)
        {
            const int r = (j * k) % (2 * p);
            double w = std::cos(std::numbers::pi * r / p) * 2.0 / p;
            if (j == 0 || j == p)
                w *= 0.5;
            if (k == 0 || k == p)
                w *= 0.5;
            if (k % 2 == 1)
                w = -w;
            W(j, k) = w;
        }
    }
    return values * W.template cast<Scalar>();
}

template <typename Scalar>
Matrix<Scalar> cheb_derivative(const Matrix<Scalar>& c)
{
    const Index rows = c.rows();
    const int p = static_cast<int>(c.cols()) - 1;
    if (p == 0)
        return Matrix<Scalar>::Zero(rows, 1);
    Matrix<Scalar> d = Matrix<Scalar>::Zero(rows, p + 1);
    for (int k = p; k >= 1; --k)
    {
        d.col(k - 1) = Scalar(2.0 * k) * c.col(k);
        if (k + 1 <= p)
            d.col(k - 1) += d.col(k + 1);
    }
    d.col(0) *= Scalar(0.5);
    return d.leftCols(p);
}

Matrix<double> cheb_integration_matrix(int p)
{
    // Column l holds the coefficients of int_{-1}^{y} T_l.
    Matrix<double> K = Matrix<double>::Zero(p + 1, p + 1);
    for (int l = 0; l <= p; ++l)
    {
        Vector<double> b = Vector<double>::Zero(p + 2);
        if (l == 0)
        {
            b(1) = 1.0;
        }
        else if (l == 1)
        {
            b(2) = 0.25;
        }
        else
        {
            b(l + 1) = 0.5 / (l + 1);
            b(l - 1) = -0.5 / (l - 1);
        }
        double at_minus_one = 0.0;
        for (int k = 1; k <= p; ++k)
            at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * b(k);
        b(0) -= at_minus_one;
        K.col(l) = b.head(p + 1);
    }
    return K;
}

namespace
{

template <typename Scalar>
Vector<Scalar> clenshaw(const Matrix<Scalar>& c, double y)
{
    const Index rows = c.rows();
    Vector<Scalar> b1 = Vector<Scalar>::Zero(rows);
    Vector<Scalar> b2 = Vector<Scalar>::Zero(rows);
    for (Index k = c.cols() - 1; k >= 1; --k)
    {
        Vector<Scalar> b0 = Scalar(2.0 * y) * b1 - b2 + c.col(k);
        b2 = b1;
        b1 = b0;
    }
    return Scalar(y) * b1 - b2 + c.col(0);
}

} // namespace

template <typename Scalar>
Vector<Scalar> ChebPiece<Scalar>::evaluate(double t, int order) const
{
    double y = (2.0 * t - a - b) / (b - a);
    y = std::clamp(y, -1.0, 1.0);
    if (order == 0)
        return clenshaw(coeffs, y);
    return clenshaw(derivative(order).coeffs, y);
}

template <typename Scalar>
ChebPiece<Scalar> ChebPiece<Scalar>::derivative(int order) const
{
    ChebPiece out = *this;
    const double scale = 2.0 / (b - a);
    for (int k = 0; k < order; ++k)
        out.coeffs = Scalar(scale) * cheb_derivative(out.coeffs);
    return out;
}

template <typename Scalar>
Matrix<Scalar> ChebPiece<Scalar>::sample(int p) const
{
    const auto y = cgl_nodes(p);
    Matrix<Scalar> out(dim(), p + 1);
    for (int j = 0; j <= p; ++j)
        out.col(j) = clenshaw(coeffs, y[j]);
    return out;
}

template <typename Scalar>
ChebPiece<Scalar>
cheb_interpolate(double a, double b, int p, Index dim,
                 const std::function<Vector<Scalar>(double)>& fn)
{
    const auto y = cgl_nodes(p);
    Matrix<Scalar> values(dim, p + 1);
    for (int j = 0; j <= p; ++j)
    {
        double t = 0.5 * (a + b) + 0.5 * (b - a) * y[j];
        if (j == 0)
            t = a;
        if (j == p && p > 0)
            t = b;
        values.col(j) = fn(t);
    }
    return ChebPiece<Scalar>{a, b, values_to_coeffs(values)};
}

template <typename Scalar>
void chop(ChebPiece<Scalar>& piece, double tol)
{
    const Index cols = piece.coeffs.cols();
    double scale = 0.0;
    for (Index k = 0; k < cols; ++k)
        scale = std::max(scale, piece.coeffs.col(k).template lpNorm<Eigen::Infinity>());
    Index keep = 1;
    for (Index k = cols - 1; k >= 1; --k)
    {
        if (piece.coeffs.col(k).template lpNorm<Eigen::Infinity>() > tol * scale)
        {
            keep = k + 1;
            break;
        }
    }
    if (keep < cols)
        piece.coeffs = piece.coeffs.leftCols(keep).eval();
}

template <typename Scalar>
ChebPiece<Scalar> cheb_from_polynomial(const PiecewisePolynomial<Scalar>& p,
                                       std::size_t piece, double a, double b)
{
    const auto& pc = p.pieces().at(piece);
    const int deg = static_cast<int>(pc.coeffs.size()) - 1;
    const std::function<Vector<Scalar>(double)> fn = [&](double t)
    {
        const Scalar s(t - pc.start);
        Vector<Scalar> acc = Vector<Scalar>::Zero(p.dim());
        for (int j = deg; j >= 0; --j)
            acc = acc * s + pc.coeffs[j];
        return acc;
    };
    return cheb_interpolate<Scalar>(a, b, deg, p.dim(), fn);
}

#define DDAE_INSTANTIATE(S)                                                   \
    template Matrix<S> values_to_coeffs<S>(const Matrix<S>&);                 \
    template Matrix<S> cheb_derivative<S>(const Matrix<S>&);                  \
    template struct ChebPiece<S>;                                             \
    template ChebPiece<S> cheb_interpolate<S>(                                \
        double, double, int, Index, const std::function<Vector<S>(double)>&); \
    template void chop<S>(ChebPiece<S>&, double);                             \
    template ChebPiece<S> cheb_from_polynomial<S>(                            \
        const PiecewisePolynomial<S>&, std::size_t, double, double);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
