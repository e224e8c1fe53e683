#ifndef DDAE_REFORMULATION_HPP
#define DDAE_REFORMULATION_HPP

#include <optional>
#include <vector>

#include "ddae/solver.hpp"

namespace ddae
{

///
/// Retarded multi-delay form of a smoothing-type system:
///   z'(t) = J z(t) + sum_{k=0}^{nu_D} D_k z(t - (k+1) tau) + theta(t)
/// for t in (nu_D tau, M tau], with z = v on [-tau, nu_D tau].
///
template <typename Scalar>
struct HiddenDelayExpansion
{
    Matrix<Scalar> J;
    /// D_0 = B_d1, D_k = (-1)^k B_d2 B_a2^{k-1} B_a1.
    std::vector<Matrix<Scalar>> D;
    /// Defined on [nu_D tau, M tau].
    PiecewisePolynomial<Scalar> theta;
    int nu_D = 0;
    double tau = 0.0;
    int horizon_intervals = 0;

    /// (k+1) tau for k = 0 .. nu_D.
    std::vector<double> delays() const;
};

/// Throws NotSmoothingType unless the system is of smoothing type on the
/// given horizon.
template <typename Scalar>
HiddenDelayExpansion<Scalar>
expand_hidden_delays(const SplitCoefficients<Scalar>& split,
                     int horizon_intervals, const RankPolicy& policy = {});

/// Solves the expansion segment by segment. The initial data on
/// [0, nu_D tau] comes from the direct method of steps for sys.
template <typename Scalar>
Trajectory<Scalar>
solve_hidden_delay_dde(const HiddenDelayExpansion<Scalar>& expansion,
                       const DdaeSystem<Scalar>& sys,
                       const SplitCoefficients<Scalar>& split,
                       const SolverConfig& config = {});

///
/// x' = A x + D x(t - tau) + B x'(t - tau) + f written in the state
/// (x, y), y(t) = x(t - tau):
///   [[I, -B], [0, 0]] (x, y)' = [[A, 0], [0, I]] (x, y)
///                               + [[D, 0], [-I, 0]] (x, y)(t - tau) + (f, 0).
/// A missing history defaults to zero.
///
template <typename Scalar>
DdaeSystem<Scalar>
embed_neutral_dde(const Matrix<Scalar>& A_hat, const Matrix<Scalar>& D_hat,
                  const Matrix<Scalar>& B_hat, double tau,
                  int horizon_intervals, const PiecewisePolynomial<Scalar>& f,
                  const std::optional<PiecewisePolynomial<Scalar>>& phi = {});

///
/// x = D x(t - tau) + B x'(t - tau) + f in the state (x, z),
/// z(t) = x(t - tau):
///   [[0, -B], [0, 0]] (x, z)' = [[-I, D], [0, I]] (x, z)
///                               + [[0, 0], [-I, 0]] (x, z)(t - tau) + (f, 0).
///
template <typename Scalar>
DdaeSystem<Scalar>
embed_pure_delay(const Matrix<Scalar>& D, const Matrix<Scalar>& B, double tau,
                 int horizon_intervals, const PiecewisePolynomial<Scalar>& f,
                 const std::optional<PiecewisePolynomial<Scalar>>& phi = {});

} // namespace ddae

#endif
