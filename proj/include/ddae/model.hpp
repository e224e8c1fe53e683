#ifndef DDAE_MODEL_HPP
#define DDAE_MODEL_HPP

#include <vector>

#include "ddae/pencil.hpp"
#include "ddae/piecewise_polynomial.hpp"

namespace ddae
{

///
/// Linear DDAE  E x'(t) = A x(t) + D x(t - tau) + f(t)  on [0, M tau] with
/// history phi on [-tau, 0].
///
template <typename Scalar>
class DdaeSystem
{
public:
    /// Validates shapes, tau > 0, M >= 1, the data domains and regularity of
    /// (E, A). Throws DimensionMismatch, MalformedInput or SingularPencil.
    DdaeSystem(Matrix<Scalar> E, Matrix<Scalar> A, Matrix<Scalar> D,
               double tau, int horizon_intervals,
               PiecewisePolynomial<Scalar> f, PiecewisePolynomial<Scalar> phi,
               const RankPolicy& policy = {});

    const Matrix<Scalar>& E() const { return E_; }
    const Matrix<Scalar>& A() const { return A_; }
    const Matrix<Scalar>& D() const { return D_; }
    double tau() const { return tau_; }
    int horizon_intervals() const { return M_; }
    double final_time() const { return tau_ * M_; }
    const PiecewisePolynomial<Scalar>& f() const { return f_; }
    const PiecewisePolynomial<Scalar>& phi() const { return phi_; }
    Index n() const { return E_.rows(); }
    MatrixPencil<Scalar> pencil() const { return {E_, A_}; }
    const RegularityVerdict& regularity() const { return regularity_; }

    /// Same matrices and data with a different history.
    DdaeSystem with_history(PiecewisePolynomial<Scalar> phi) const;
    DdaeSystem with_horizon(int horizon_intervals) const;

private:
    Matrix<Scalar> E_, A_, D_;
    double tau_;
    int M_;
    PiecewisePolynomial<Scalar> f_;
    PiecewisePolynomial<Scalar> phi_;
    RegularityVerdict regularity_;
    RankPolicy policy_;
};

///
/// All matrices derived from the quasi-Weierstrass form, plus the
/// transformed data [g; h] = S f and [psi; eta] = T^{-1} phi.
///
template <typename Scalar>
struct SplitCoefficients
{
    QuasiWeierstrassForm<Scalar> qwf;
    Matrix<Scalar> A_diff;
    Matrix<Scalar> A_con;
    /// C_0 .. C_nu.
    std::vector<Matrix<Scalar>> C;
    /// B_k = C_k D, k = 0 .. nu.
    std::vector<Matrix<Scalar>> B;
    Matrix<Scalar> B_d, B_a;
    Matrix<Scalar> B_d1, B_d2, B_a1, B_a2;
    PiecewisePolynomial<Scalar> g, h;
    PiecewisePolynomial<Scalar> psi, eta;
    /// |S| |D|: reference magnitude for deciding whether B_a-type products
    /// vanish.
    double coupling_scale = 0.0;

    int nu() const { return qwf.nu; }
    Index n_d() const { return qwf.n_d; }
    Index n_a() const { return qwf.n_a; }
};

template <typename Scalar>
SplitCoefficients<Scalar> build_split(const DdaeSystem<Scalar>& sys,
                                      const RankPolicy& policy = {});

/// Forcing of the underlying ODE  x' = A_diff x + sum_k C_k q^(k).
template <typename Scalar>
struct UnderlyingOdeRhs
{
    Matrix<Scalar> A_diff;
    PiecewisePolynomial<Scalar> forcing;
};

template <typename Scalar>
UnderlyingOdeRhs<Scalar>
underlying_ode_rhs(const SplitCoefficients<Scalar>& split,
                   const PiecewisePolynomial<Scalar>& q);

template <typename Scalar>
struct UnderlyingDdeCoefficients
{
    std::vector<Matrix<Scalar>> B;
    std::vector<Matrix<Scalar>> C;
};

template <typename Scalar>
UnderlyingDdeCoefficients<Scalar>
underlying_dde_coeffs(const SplitCoefficients<Scalar>& split);

/// Closed-form solution w = -sum_{k<nu} N^k q^(k) of N w' = w + q.
template <typename Scalar>
PiecewisePolynomial<Scalar>
solve_fast_subsystem(const Matrix<Scalar>& N, int nu,
                     const PiecewisePolynomial<Scalar>& q);

} // namespace ddae

#endif
