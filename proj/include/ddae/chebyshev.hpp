#ifndef DDAE_CHEBYSHEV_HPP
#define DDAE_CHEBYSHEV_HPP

#include <functional>

#include "ddae/linalg.hpp"
#include "ddae/piecewise_polynomial.hpp"

namespace ddae
{

/// Chebyshev-Gauss-Lobatto nodes -cos(pi j / p) on [-1, 1], j = 0 .. p
/// (ascending).
std::vector<double> cgl_nodes(int p);

/// Map values at cgl_nodes(p) to Chebyshev coefficients (one column per
/// coefficient).
template <typename Scalar>
Matrix<Scalar> values_to_coeffs(const Matrix<Scalar>& values);

/// Coefficients of d/dy of a Chebyshev series on [-1, 1].
template <typename Scalar>
Matrix<Scalar> cheb_derivative(const Matrix<Scalar>& c);

/// Antiderivative operator on coefficients: maps c (degree p) to the
/// coefficients of int_{-1}^{y} of the series, truncated to degree p.
Matrix<double> cheb_integration_matrix(int p);

///
/// Vector-valued Chebyshev series on [a, b]. Column k of coeffs multiplies
/// T_k(y) with y = (2t - a - b) / (b - a).
///
template <typename Scalar>
struct ChebPiece
{
    double a = 0.0;
    double b = 0.0;
    Matrix<Scalar> coeffs;

    Index dim() const { return coeffs.rows(); }
    int degree() const { return static_cast<int>(coeffs.cols()) - 1; }
    Vector<Scalar> evaluate(double t, int order = 0) const;
    ChebPiece derivative(int order = 1) const;
    /// Values at the p + 1 mapped Lobatto nodes.
    Matrix<Scalar> sample(int p) const;
};

/// Interpolant of degree p on [a, b]; fn is called at the mapped nodes.
template <typename Scalar>
ChebPiece<Scalar>
cheb_interpolate(double a, double b, int p, Index dim,
                 const std::function<Vector<Scalar>(double)>& fn);

/// Drops trailing coefficients below tol times the largest coefficient.
template <typename Scalar>
void chop(ChebPiece<Scalar>& piece, double tol);

/// Exact conversion of one polynomial piece restricted to [a, b].
template <typename Scalar>
ChebPiece<Scalar> cheb_from_polynomial(const PiecewisePolynomial<Scalar>& p,
                                       std::size_t piece, double a, double b);

} // namespace ddae

#endif
