#ifndef DDAE_LINALG_HPP
#define DDAE_LINALG_HPP

#include <complex>
#include <type_traits>

#include <Eigen/Core>

namespace ddae
{

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

///
/// Numerical rank decisions.
///
/// A singular value sigma counts as nonzero iff
/// sigma > max(abs_floor, rel_tol * sigma_ref), where sigma_ref is the
/// largest singular value of the operator the decision is made for.
///
struct RankPolicy
{
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;

    double threshold(double sigma_ref) const;
    bool nonzero(double sigma, double sigma_ref) const
    {
        return sigma > threshold(sigma_ref);
    }
    /// True when sigma lies within a factor 10 of the threshold.
    bool ambiguous(double sigma, double sigma_ref) const;
};

/// Orthonormal basis together with a flag raised when some singular value
/// was close to the rank threshold.
template <typename Scalar>
struct SubspaceBasis
{
    Matrix<Scalar> basis;
    bool ambiguous = false;
};

/// Spectral norm (largest singular value); 0 for empty matrices.
template <typename Scalar>
double operator_norm(const Matrix<Scalar>& m);

/// Orthonormal basis of range(m). Rank is decided against sigma_ref.
template <typename Scalar>
SubspaceBasis<Scalar> range_basis(const Matrix<Scalar>& m, double sigma_ref,
                                  const RankPolicy& policy);

/// Orthonormal basis of ker(m) (m has n columns, result is n x k).
template <typename Scalar>
SubspaceBasis<Scalar> kernel_basis(const Matrix<Scalar>& m, double sigma_ref,
                                   const RankPolicy& policy);

/// Numerical rank of m measured against its own largest singular value.
template <typename Scalar>
Index numerical_rank(const Matrix<Scalar>& m, const RankPolicy& policy);

/// Block diagonal matrix diag(a, b).
template <typename Scalar>
Matrix<Scalar> block_diag(const Matrix<Scalar>& a, const Matrix<Scalar>& b);

/// Frobenius norm of a product bounded away from rounding: used as the
/// common "is this matrix zero" test across the analysis modules.
template <typename Scalar>
bool numerically_zero(const Matrix<Scalar>& m, double scale,
                      const RankPolicy& policy)
{
    return m.norm() <= policy.threshold(scale);
}

} // namespace ddae

#endif
