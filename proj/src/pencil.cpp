#include "ddae/pencil.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "ddae/errors.hpp"

namespace ddae
{

template <typename Scalar>
MatrixPencil<Scalar>::MatrixPencil(Matrix<Scalar> E, Matrix<Scalar> A)
    : E_(std::move(E)), A_(std::move(A))
{
    if (E_.rows() == 0 || E_.rows() != E_.cols() || A_.rows() != A_.cols() ||
        A_.rows() != E_.rows())
    {
        throw DimensionMismatch("pencil matrices must be square, nonempty "
                                "and of equal size");
    }
}

template <typename Scalar>
double reconstruction_tolerance(const MatrixPencil<Scalar>& p)
{
    return 1e-8 * (1.0 + p.E().norm() + p.A().norm());
}

template <typename Scalar>
RegularityVerdict check_regularity(const MatrixPencil<Scalar>& p,
                                   const RankPolicy& policy)
{
    RegularityVerdict verdict;
    const Index n = p.n();
    verdict.sample_scale = (1.0 + p.A().norm()) / (1.0 + p.E().norm());

    for (Index j = 0; j <= n; ++j)
    {
        const double lambda = static_cast<double>(j) * verdict.sample_scale;
        const Matrix<Scalar> m = Scalar(lambda) * p.E() - p.A();
        Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
        const auto& sv = svd.singularValues();
        const double magnitude = sv.prod();
        if (policy.nonzero(sv(n - 1), sv(0)))
        {
            verdict.regular = true;
            verdict.witness = lambda;
            verdict.determinant_magnitude = magnitude;
            return verdict;
        }
        verdict.determinant_magnitude =
            std::max(verdict.determinant_magnitude, magnitude);
    }
    return verdict;
}

template <typename Scalar>
WongSubspaces<Scalar> wong_sequences(const MatrixPencil<Scalar>& p,
                                     const RankPolicy& policy)
{
    if (!check_regularity(p, policy).regular)
        throw SingularPencil("pencil (E, A) is not regular");

    const Index n = p.n();
    const Matrix<Scalar>& E = p.E();
    const Matrix<Scalar>& A = p.A();
    const double norm_e = operator_norm(E);
    const double norm_a = operator_norm(A);

    WongSubspaces<Scalar> out;

    // V_{i+1} = A^{-1}(E V_i), decreasing from the full space.
    Matrix<Scalar> V = Matrix<Scalar>::Identity(n, n);
    for (Index it = 0; it <= n; ++it)
    {
        const auto image = range_basis<Scalar>(E * V, norm_e, policy);
        const Matrix<Scalar>& U = image.basis;
        const Matrix<Scalar> projected = A - U * (U.adjoint() * A);
        auto pre = kernel_basis<Scalar>(projected, norm_a, policy);
        out.rank_ambiguous =
            out.rank_ambiguous || image.ambiguous || pre.ambiguous;
        ++out.iterations_v;
        const bool stable = pre.basis.cols() == V.cols();
        V = std::move(pre.basis);
        if (stable)
            break;
    }

    // W_{i+1} = E^{-1}(A W_i), increasing from {0}.
    Matrix<Scalar> W = Matrix<Scalar>::Zero(n, 0);
    for (Index it = 0; it <= n; ++it)
    {
        const auto image = range_basis<Scalar>(A * W, norm_a, policy);
        const Matrix<Scalar>& U = image.basis;
        const Matrix<Scalar> projected = E - U * (U.adjoint() * E);
        auto pre = kernel_basis<Scalar>(projected, norm_e, policy);
        out.rank_ambiguous =
            out.rank_ambiguous || image.ambiguous || pre.ambiguous;
        ++out.iterations_w;
        const bool stable = pre.basis.cols() == W.cols();
        W = std::move(pre.basis);
        if (stable)
            break;
    }

    if (V.cols() + W.cols() != n)
    {
        throw DecompositionFailure(
            "Wong limits have dimensions " + std::to_string(V.cols()) + " + " +
            std::to_string(W.cols()) + " != " + std::to_string(n) +
            "; tighten the rank policy");
    }
    Matrix<Scalar> VW(n, n);
    VW << V, W;
    if (numerical_rank<Scalar>(VW, policy) != n)
        throw DecompositionFailure("Wong limits are not complementary");

    out.V = std::move(V);
    out.W = std::move(W);
    return out;
}

template <typename Scalar>
Nilpotency nilpotency_index(const Matrix<Scalar>& N, const RankPolicy& policy)
{
    if (N.rows() != N.cols())
        throw DimensionMismatch("nilpotency_index needs a square matrix");
    const Index m = N.rows();
    if (m == 0)
        return {true, 0};

    const double norm = N.norm();
    Matrix<Scalar> power = N;
    for (Index k = 1; k <= m; ++k)
    {
        const double bound =
            policy.rel_tol * (1.0 + std::pow(norm, static_cast<double>(k)));
        if (power.norm() <= bound)
            return {true, static_cast<int>(k)};
        power = power * N;
    }
    return {false, std::nullopt};
}

template <typename Scalar>
QuasiWeierstrassForm<Scalar> compute_qwf(const MatrixPencil<Scalar>& p,
                                         const RankPolicy& policy)
{
    const auto wong = wong_sequences(p, policy);
    const Index n = p.n();
    const Index n_d = wong.V.cols();
    const Index n_a = wong.W.cols();

    QuasiWeierstrassForm<Scalar> qwf;
    qwf.n_d = n_d;
    qwf.n_a = n_a;
    qwf.rank_ambiguous = wong.rank_ambiguous;

    qwf.T.resize(n, n);
    qwf.T << wong.V, wong.W;

    Matrix<Scalar> Z(n, n);
    Z << p.E() * wong.V, p.A() * wong.W;
    if (numerical_rank<Scalar>(Z, policy) != n)
    {
        throw DecompositionFailure(
            "[E V*, A W*] is numerically singular; tighten the rank policy");
    }
    Eigen::FullPivLU<Matrix<Scalar>> lu(Z);
    qwf.S = lu.inverse();
    qwf.T_inv = Eigen::FullPivLU<Matrix<Scalar>>(qwf.T).inverse();

    const Matrix<Scalar> set = qwf.S * p.E() * qwf.T;
    const Matrix<Scalar> sat = qwf.S * p.A() * qwf.T;
    qwf.J = sat.topLeftCorner(n_d, n_d);
    qwf.N = set.bottomRightCorner(n_a, n_a);

    const Matrix<Scalar> target_e =
        block_diag<Scalar>(Matrix<Scalar>::Identity(n_d, n_d), qwf.N);
    const Matrix<Scalar> target_a =
        block_diag<Scalar>(qwf.J, Matrix<Scalar>::Identity(n_a, n_a));
    qwf.reconstruction_residual =
        std::max((set - target_e).norm(), (sat - target_a).norm());
    if (qwf.reconstruction_residual > reconstruction_tolerance(p))
    {
        throw DecompositionFailure(
            "quasi-Weierstrass off-diagonal blocks exceed tolerance (" +
            std::to_string(qwf.reconstruction_residual) + ")");
    }

    const Nilpotency nil = nilpotency_index<Scalar>(qwf.N, policy);
    if (!nil.nilpotent)
        throw DecompositionFailure("algebraic block N is not nilpotent");
    qwf.nu = n_a == 0 ? 0 : *nil.index;
    return qwf;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template class MatrixPencil<S>;                                           \
    template double reconstruction_tolerance<S>(const MatrixPencil<S>&);      \
    template RegularityVerdict check_regularity<S>(const MatrixPencil<S>&,    \
                                                   const RankPolicy&);        \
    template WongSubspaces<S> wong_sequences<S>(const MatrixPencil<S>&,       \
                                                const RankPolicy&);           \
    template Nilpotency nilpotency_index<S>(const Matrix<S>&,                 \
                                            const RankPolicy&);               \
    template QuasiWeierstrassForm<S> compute_qwf<S>(const MatrixPencil<S>&,   \
                                                    const RankPolicy&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
