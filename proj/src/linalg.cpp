#include "ddae/linalg.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace ddae
{

double RankPolicy::threshold(double sigma_ref) const
{
    return std::max(abs_floor, rel_tol * sigma_ref);
}

bool RankPolicy::ambiguous(double sigma, double sigma_ref) const
{
    const double thr = threshold(sigma_ref);
    return sigma > thr / 10.0 && sigma <= thr * 10.0;
}

template <typename Scalar>
double operator_norm(const Matrix<Scalar>& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
    return svd.singularValues()(0);
}

template <typename Scalar>
SubspaceBasis<Scalar> range_basis(const Matrix<Scalar>& m, double sigma_ref,
                                  const RankPolicy& policy)
{
    SubspaceBasis<Scalar> out;
    if (m.cols() == 0 || m.rows() == 0)
    {
        out.basis = Matrix<Scalar>::Zero(m.rows(), 0);
        return out;
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
    {
        if (policy.nonzero(sv(i), sigma_ref))
            ++rank;
        out.ambiguous = out.ambiguous || policy.ambiguous(sv(i), sigma_ref);
    }
    out.basis = svd.matrixU().leftCols(rank);
    return out;
}

template <typename Scalar>
SubspaceBasis<Scalar> kernel_basis(const Matrix<Scalar>& m, double sigma_ref,
                                   const RankPolicy& policy)
{
    SubspaceBasis<Scalar> out;
    const Index n = m.cols();
    if (m.rows() == 0)
    {
        out.basis = Matrix<Scalar>::Identity(n, n);
        return out;
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
    {
        if (policy.nonzero(sv(i), sigma_ref))
            ++rank;
        out.ambiguous = out.ambiguous || policy.ambiguous(sv(i), sigma_ref);
    }
    out.basis = svd.matrixV().rightCols(n - rank);
    return out;
}

template <typename Scalar>
Index numerical_rank(const Matrix<Scalar>& m, const RankPolicy& policy)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (policy.nonzero(sv(i), sv(0)))
            ++rank;
    return rank;
}

template <typename Scalar>
Matrix<Scalar> block_diag(const Matrix<Scalar>& a, const Matrix<Scalar>& b)
{
    Matrix<Scalar> out = Matrix<Scalar>::Zero(a.rows() + b.rows(),
                                              a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template double operator_norm<S>(const Matrix<S>&);                       \
    template SubspaceBasis<S> range_basis<S>(const Matrix<S>&, double,        \
                                             const RankPolicy&);              \
    template SubspaceBasis<S> kernel_basis<S>(const Matrix<S>&, double,       \
                                              const RankPolicy&);             \
    template Index numerical_rank<S>(const Matrix<S>&, const RankPolicy&);    \
    template Matrix<S> block_diag<S>(const Matrix<S>&, const Matrix<S>&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
