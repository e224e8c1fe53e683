#include "ddae/piecewise_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddae/errors.hpp"

namespace ddae
{

namespace
{

// j! / (j - order)!
double falling_factorial(int j, int order)
{
    double out = 1.0;
    for (int i = 0; i < order; ++i)
        out *= static_cast<double>(j - i);
    return out;
}

} // namespace

std::vector<double> merge_knots(const std::vector<double>& a,
                                const std::vector<double>& b, double tol)
{
    std::vector<double> all;
    all.reserve(a.size() + b.size());
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double t : all)
    {
        if (out.empty() || t - out.back() > tol)
            out.push_back(t);
    }
    return out;
}

template <typename Scalar>
std::vector<Vector<Scalar>> taylor_shift(const std::vector<Vector<Scalar>>& c,
                                         double delta)
{
    std::vector<Vector<Scalar>> out = c;
    const int deg = static_cast<int>(out.size()) - 1;
    if (delta == 0.0)
        return out;
    for (int i = 0; i < deg; ++i)
        for (int j = deg - 1; j >= i; --j)
            out[j] += Scalar(delta) * out[j + 1];
    return out;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>::PiecewisePolynomial(std::vector<Piece> pieces,
                                                 Index dim)
    : pieces_(std::move(pieces)), dim_(dim)
{
    if (pieces_.empty())
        throw MalformedInput("piecewise polynomial needs at least one piece");
    const double tol = knot_tolerance();
    for (std::size_t k = 0; k < pieces_.size(); ++k)
    {
        Piece& piece = pieces_[k];
        if (!(piece.end > piece.start))
            throw MalformedInput("piece boundaries must be strictly increasing");
        if (piece.coeffs.empty())
            throw MalformedInput("every piece needs at least one coefficient");
        if (static_cast<int>(piece.coeffs.size()) > max_degree_cap + 1)
        {
            throw MalformedInput("polynomial degree exceeds cap of " +
                                 std::to_string(max_degree_cap));
        }
        for (const auto& c : piece.coeffs)
            if (c.size() != dim_)
                throw MalformedInput("coefficient vector has wrong dimension");
        if (k > 0)
        {
            const double prev_end = pieces_[k - 1].end;
            if (std::abs(piece.start - prev_end) > tol)
                throw MalformedInput("pieces are not contiguous");
            piece.start = prev_end;
        }
    }
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::constant(double start, double end,
                                      const Vector<Scalar>& value)
{
    return PiecewisePolynomial({Piece{start, end, {value}}}, value.size());
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::zero(double start, double end, Index dim)
{
    return constant(start, end, Vector<Scalar>::Zero(dim));
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::single(double start, double end,
                                    std::vector<Vector<Scalar>> coeffs)
{
    const Index dim = coeffs.empty() ? 0 : coeffs.front().size();
    return PiecewisePolynomial({Piece{start, end, std::move(coeffs)}}, dim);
}

template <typename Scalar>
double PiecewisePolynomial<Scalar>::knot_tolerance() const
{
    if (pieces_.empty())
        return 0.0;
    const double span = pieces_.back().end - pieces_.front().start;
    const double mag =
        std::max(std::abs(pieces_.front().start), std::abs(pieces_.back().end));
    return 1e-12 * (std::abs(span) + mag + 1e-300);
}

template <typename Scalar>
std::vector<double> PiecewisePolynomial<Scalar>::breakpoints() const
{
    std::vector<double> out;
    out.reserve(pieces_.size() + 1);
    for (const auto& p : pieces_)
        out.push_back(p.start);
    out.push_back(pieces_.back().end);
    return out;
}

template <typename Scalar>
int PiecewisePolynomial<Scalar>::degree() const
{
    int deg = 0;
    for (const auto& p : pieces_)
        deg = std::max(deg, static_cast<int>(p.coeffs.size()) - 1);
    return deg;
}

template <typename Scalar>
std::size_t PiecewisePolynomial<Scalar>::locate(double t, Side side) const
{
    const double tol = knot_tolerance();
    if (t < start() - tol || t > end() + tol)
    {
        throw OutOfDomain("t = " + std::to_string(t) + " outside [" +
                          std::to_string(start()) + ", " +
                          std::to_string(end()) + "]");
    }
    if (side == Side::Right)
    {
        for (std::size_t k = pieces_.size(); k-- > 0;)
            if (t >= pieces_[k].start - tol)
                return k;
        return 0;
    }
    for (std::size_t k = 0; k < pieces_.size(); ++k)
        if (t <= pieces_[k].end + tol)
            return k;
    return pieces_.size() - 1;
}

template <typename Scalar>
Vector<Scalar> PiecewisePolynomial<Scalar>::evaluate(double t, int order,
                                                     Side side) const
{
    const Piece& piece = pieces_[locate(t, side)];
    const int deg = static_cast<int>(piece.coeffs.size()) - 1;
    Vector<Scalar> acc = Vector<Scalar>::Zero(dim_);
    if (order > deg)
        return acc;
    const Scalar s(t - piece.start);
    for (int j = deg; j >= order; --j)
        acc = acc * s + Scalar(falling_factorial(j, order)) * piece.coeffs[j];
    return acc;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::derivative(int order) const
{
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (const auto& piece : pieces_)
    {
        Piece d{piece.start, piece.end, {}};
        const int deg = static_cast<int>(piece.coeffs.size()) - 1;
        for (int j = 0; j + order <= deg; ++j)
            d.coeffs.push_back(Scalar(falling_factorial(j + order, order)) *
                               piece.coeffs[j + order]);
        if (d.coeffs.empty())
            d.coeffs.push_back(Vector<Scalar>::Zero(dim_));
        out.push_back(std::move(d));
    }
    return PiecewisePolynomial(std::move(out), dim_);
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::transformed(const Matrix<Scalar>& M) const
{
    if (M.cols() != dim_)
        throw DimensionMismatch("matrix does not match polynomial dimension");
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (const auto& piece : pieces_)
    {
        Piece t{piece.start, piece.end, {}};
        for (const auto& c : piece.coeffs)
            t.coeffs.push_back(M * c);
        out.push_back(std::move(t));
    }
    return PiecewisePolynomial(std::move(out), M.rows());
}

template <typename Scalar>
PiecewisePolynomial<Scalar> PiecewisePolynomial<Scalar>::scaled(Scalar c) const
{
    PiecewisePolynomial out = *this;
    for (auto& piece : out.pieces_)
        for (auto& v : piece.coeffs)
            v *= c;
    return out;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::shifted(double delta) const
{
    PiecewisePolynomial out = *this;
    for (auto& piece : out.pieces_)
    {
        piece.start += delta;
        piece.end += delta;
    }
    return out;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::refined(const std::vector<double>& knots) const
{
    const double tol = knot_tolerance();
    std::vector<Piece> out;
    for (const auto& piece : pieces_)
    {
        std::vector<double> cuts{piece.start};
        for (double k : knots)
            if (k > piece.start + tol && k < piece.end - tol)
                cuts.push_back(k);
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(piece.end);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
        {
            if (cuts[c + 1] - cuts[c] <= tol)
                continue;
            out.push_back(Piece{cuts[c], cuts[c + 1],
                                taylor_shift(piece.coeffs,
                                             cuts[c] - piece.start)});
        }
    }
    return PiecewisePolynomial(std::move(out), dim_);
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::restricted(double a, double b) const
{
    const double tol = knot_tolerance();
    if (a < start() - tol || b > end() + tol || !(b > a))
        throw OutOfDomain("restriction interval outside the domain");
    const PiecewisePolynomial fine = refined({a, b});
    std::vector<Piece> out;
    for (const auto& piece : fine.pieces_)
        if (piece.start >= a - tol && piece.end <= b + tol)
            out.push_back(piece);
    out.front().start = std::max(out.front().start, a);
    out.back().end = std::min(out.back().end, b);
    return PiecewisePolynomial(std::move(out), dim_);
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::operator+(const PiecewisePolynomial& other) const
{
    const double tol = std::max(knot_tolerance(), other.knot_tolerance());
    if (other.dim_ != dim_)
        throw DimensionMismatch("cannot add polynomials of different dimension");
    if (std::abs(other.start() - start()) > tol ||
        std::abs(other.end() - end()) > tol)
        throw OutOfDomain("cannot add polynomials on different domains");
    const auto knots = merge_knots(breakpoints(), other.breakpoints(), tol);
    PiecewisePolynomial lhs = refined(knots);
    const PiecewisePolynomial rhs = other.refined(knots);
    if (lhs.pieces_.size() != rhs.pieces_.size())
        throw OutOfDomain("knot refinement mismatch");
    for (std::size_t k = 0; k < lhs.pieces_.size(); ++k)
    {
        auto& a = lhs.pieces_[k].coeffs;
        const auto& b = rhs.pieces_[k].coeffs;
        if (a.size() < b.size())
            a.resize(b.size(), Vector<Scalar>::Zero(dim_));
        for (std::size_t j = 0; j < b.size(); ++j)
            a[j] += b[j];
    }
    return lhs;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
PiecewisePolynomial<Scalar>::operator-(const PiecewisePolynomial& other) const
{
    return *this + other.scaled(Scalar(-1.0));
}

template class PiecewisePolynomial<double>;
template class PiecewisePolynomial<Complex>;
template std::vector<Vector<double>>
taylor_shift<double>(const std::vector<Vector<double>>&, double);
template std::vector<Vector<Complex>>
taylor_shift<Complex>(const std::vector<Vector<Complex>>&, double);

} // namespace ddae
