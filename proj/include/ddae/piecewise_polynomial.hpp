#ifndef DDAE_PIECEWISE_POLYNOMIAL_HPP
#define DDAE_PIECEWISE_POLYNOMIAL_HPP

#include <vector>

#include "ddae/linalg.hpp"

namespace ddae
{

/// Which one-sided limit to take at an interior knot.
enum class Side
{
    Left,
    Right
};

///
/// Vector-valued piecewise polynomial on a closed interval.
///
/// Each piece stores monomial coefficients in the local variable
/// (t - start); pieces are contiguous. Evaluation and differentiation of
/// any order are exact up to floating point rounding.
///
template <typename Scalar>
class PiecewisePolynomial
{
public:
    struct Piece
    {
        double start = 0.0;
        double end = 0.0;
        /// coeffs[j] multiplies (t - start)^j.
        std::vector<Vector<Scalar>> coeffs;
    };

    static constexpr int max_degree_cap = 64;
    static constexpr int conditioning_degree = 24;

    PiecewisePolynomial() = default;
    /// Validates contiguity, positive piece length, coefficient sizes and
    /// the degree cap; throws MalformedInput otherwise.
    PiecewisePolynomial(std::vector<Piece> pieces, Index dim);

    static PiecewisePolynomial constant(double start, double end,
                                        const Vector<Scalar>& value);
    static PiecewisePolynomial zero(double start, double end, Index dim);
    /// Single piece from monomial coefficients in (t - start).
    static PiecewisePolynomial single(double start, double end,
                                      std::vector<Vector<Scalar>> coeffs);

    Index dim() const { return dim_; }
    double start() const { return pieces_.front().start; }
    double end() const { return pieces_.back().end; }
    bool empty() const { return pieces_.empty(); }
    const std::vector<Piece>& pieces() const { return pieces_; }
    /// Piece boundaries including both domain ends.
    std::vector<double> breakpoints() const;
    int degree() const;
    /// Degree above the level where the monomial basis loses accuracy.
    bool conditioning_warning() const { return degree() > conditioning_degree; }

    /// order-th derivative at t. At an interior knot the side selects the
    /// piece; domain ends always use the adjacent piece. Throws OutOfDomain.
    Vector<Scalar> evaluate(double t, int order = 0,
                            Side side = Side::Right) const;

    PiecewisePolynomial derivative(int order = 1) const;
    /// t -> M p(t).
    PiecewisePolynomial transformed(const Matrix<Scalar>& M) const;
    PiecewisePolynomial scaled(Scalar c) const;
    /// t -> p(t - delta), defined on [start + delta, end + delta].
    PiecewisePolynomial shifted(double delta) const;
    /// Restriction to [a, b] within the domain.
    PiecewisePolynomial restricted(double a, double b) const;
    /// Same function with additional knots (re-expanded coefficients).
    PiecewisePolynomial refined(const std::vector<double>& knots) const;

    /// Sum of two functions on the same domain; knots are merged.
    PiecewisePolynomial operator+(const PiecewisePolynomial& other) const;
    PiecewisePolynomial operator-(const PiecewisePolynomial& other) const;

    /// Index of the piece containing t for the given side.
    std::size_t locate(double t, Side side) const;

    /// Knot comparison tolerance relative to the domain size.
    double knot_tolerance() const;

private:
    std::vector<Piece> pieces_;
    Index dim_ = 0;
};

/// Merges sorted knot lists, dropping near-duplicates.
std::vector<double> merge_knots(const std::vector<double>& a,
                                const std::vector<double>& b, double tol);

/// Coefficients of p(s + delta) from those of p(s).
template <typename Scalar>
std::vector<Vector<Scalar>> taylor_shift(const std::vector<Vector<Scalar>>& c,
                                         double delta);

} // namespace ddae

#endif
