#include "ddae/model.hpp"

#include <cmath>

#include "ddae/errors.hpp"

namespace ddae
{

template <typename Scalar>
DdaeSystem<Scalar>::DdaeSystem(Matrix<Scalar> E, Matrix<Scalar> A,
                               Matrix<Scalar> D, double tau,
                               int horizon_intervals,
                               PiecewisePolynomial<Scalar> f,
                               PiecewisePolynomial<Scalar> phi,
                               const RankPolicy& policy)
    : E_(std::move(E)), A_(std::move(A)), D_(std::move(D)), tau_(tau),
      M_(horizon_intervals), f_(std::move(f)), phi_(std::move(phi)),
      policy_(policy)
{
    const MatrixPencil<Scalar> p(E_, A_);
    if (D_.rows() != p.n() || D_.cols() != p.n())
        throw DimensionMismatch("delay matrix D must be n x n");
    if (!(tau_ > 0.0) || !std::isfinite(tau_))
        throw MalformedInput("delay tau must be positive");
    if (M_ < 1)
        throw MalformedInput("horizon_intervals must be at least 1");
    if (f_.empty() || phi_.empty())
        throw MalformedInput("inhomogeneity and history are required");
    if (f_.dim() != p.n() || phi_.dim() != p.n())
        throw DimensionMismatch("data functions must have dimension n");

    const double tol = 1e-12 * (1.0 + tau_ * M_);
    if (std::abs(phi_.start() + tau_) > tol || std::abs(phi_.end()) > tol)
        throw MalformedInput("history must be defined on exactly [-tau, 0]");
    if (std::abs(f_.start()) > tol || std::abs(f_.end() - tau_ * M_) > tol)
        throw MalformedInput("inhomogeneity must cover exactly [0, M tau]");

    regularity_ = check_regularity(p, policy_);
    if (!regularity_.regular)
        throw SingularPencil("pencil (E, A) is not regular");
}

template <typename Scalar>
DdaeSystem<Scalar>
DdaeSystem<Scalar>::with_history(PiecewisePolynomial<Scalar> phi) const
{
    return DdaeSystem(E_, A_, D_, tau_, M_, f_, std::move(phi), policy_);
}

template <typename Scalar>
DdaeSystem<Scalar> DdaeSystem<Scalar>::with_horizon(int horizon_intervals) const
{
    // Extend f by its last piece's polynomial when the horizon grows.
    PiecewisePolynomial<Scalar> f = f_;
    const double new_end = tau_ * horizon_intervals;
    if (new_end > f.end())
    {
        auto pieces = f.pieces();
        pieces.back().end = new_end;
        f = PiecewisePolynomial<Scalar>(std::move(pieces), f.dim());
    }
    else if (new_end < f.end())
    {
        f = f.restricted(0.0, new_end);
    }
    return DdaeSystem(E_, A_, D_, tau_, horizon_intervals, std::move(f), phi_,
                      policy_);
}

template <typename Scalar>
SplitCoefficients<Scalar> build_split(const DdaeSystem<Scalar>& sys,
                                      const RankPolicy& policy)
{
    SplitCoefficients<Scalar> split;
    split.qwf = compute_qwf(sys.pencil(), policy);
    const auto& q = split.qwf;
    const Index n_d = q.n_d;
    const Index n_a = q.n_a;
    const int nu = q.nu;

    const Matrix<Scalar> I_d = Matrix<Scalar>::Identity(n_d, n_d);
    const Matrix<Scalar> Z_a = Matrix<Scalar>::Zero(n_a, n_a);
    const Matrix<Scalar> Z_d = Matrix<Scalar>::Zero(n_d, n_d);

    split.A_diff = q.T * block_diag<Scalar>(q.J, Z_a) * q.T_inv;
    split.A_con = q.T * block_diag<Scalar>(I_d, Z_a) * q.T_inv;

    split.C.push_back(q.T * block_diag<Scalar>(I_d, Z_a) * q.S);
    Matrix<Scalar> N_power = Matrix<Scalar>::Identity(n_a, n_a);
    for (int k = 1; k <= nu; ++k)
    {
        split.C.push_back(-(q.T * block_diag<Scalar>(Z_d, N_power) * q.S));
        N_power = N_power * q.N;
    }
    for (const auto& C : split.C)
        split.B.push_back(C * sys.D());

    const Matrix<Scalar> SD = q.S * sys.D();
    const Matrix<Scalar> SDT = SD * q.T;
    split.B_d = SD.topRows(n_d);
    split.B_a = SD.bottomRows(n_a);
    split.B_d1 = SDT.topLeftCorner(n_d, n_d);
    split.B_d2 = SDT.topRightCorner(n_d, n_a);
    split.B_a1 = SDT.bottomLeftCorner(n_a, n_d);
    split.B_a2 = SDT.bottomRightCorner(n_a, n_a);

    split.g = sys.f().transformed(q.S.topRows(n_d));
    split.h = sys.f().transformed(q.S.bottomRows(n_a));
    split.psi = sys.phi().transformed(q.T_inv.topRows(n_d));
    split.eta = sys.phi().transformed(q.T_inv.bottomRows(n_a));

    split.coupling_scale = q.S.norm() * sys.D().norm();
    return split;
}

template <typename Scalar>
UnderlyingOdeRhs<Scalar>
underlying_ode_rhs(const SplitCoefficients<Scalar>& split,
                   const PiecewisePolynomial<Scalar>& q)
{
    UnderlyingOdeRhs<Scalar> out;
    out.A_diff = split.A_diff;
    out.forcing = q.transformed(split.C[0]);
    for (int k = 1; k <= split.nu(); ++k)
        out.forcing = out.forcing + q.derivative(k).transformed(split.C[k]);
    return out;
}

template <typename Scalar>
UnderlyingDdeCoefficients<Scalar>
underlying_dde_coeffs(const SplitCoefficients<Scalar>& split)
{
    return {split.B, split.C};
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
solve_fast_subsystem(const Matrix<Scalar>& N, int nu,
                     const PiecewisePolynomial<Scalar>& q)
{
    if (N.rows() != q.dim())
        throw DimensionMismatch("fast subsystem dimension mismatch");
    if (nu == 0)
        return PiecewisePolynomial<Scalar>::zero(q.start(), q.end(), q.dim());
    PiecewisePolynomial<Scalar> w = q.scaled(Scalar(-1.0));
    Matrix<Scalar> N_power = Matrix<Scalar>::Identity(N.rows(), N.cols());
    for (int k = 1; k < nu; ++k)
    {
        N_power = N_power * N;
        w = w - q.derivative(k).transformed(N_power);
    }
    return w;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template class DdaeSystem<S>;                                             \
    template SplitCoefficients<S> build_split<S>(const DdaeSystem<S>&,        \
                                                 const RankPolicy&);          \
    template UnderlyingOdeRhs<S> underlying_ode_rhs<S>(                       \
        const SplitCoefficients<S>&, const PiecewisePolynomial<S>&);          \
    template UnderlyingDdeCoefficients<S> underlying_dde_coeffs<S>(           \
        const SplitCoefficients<S>&);                                         \
    template PiecewisePolynomial<S> solve_fast_subsystem<S>(                  \
        const Matrix<S>&, int, const PiecewisePolynomial<S>&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
