#ifndef DDAE_SOLVER_HPP
#define DDAE_SOLVER_HPP

#include <optional>
#include <vector>

#include "ddae/chebyshev.hpp"
#include "ddae/model.hpp"

namespace ddae
{

enum class OnInconsistent
{
    /// Throw InconsistentRestart.
    Stop,
    /// Return the partial trajectory with the failing knot in the ledger.
    Record
};

struct SolverConfig
{
    /// Chebyshev degree per collocation piece.
    int degree = 48;
    /// Highest derivative order compared at knots; defaults to nu + 2.
    std::optional<int> k_max;
    /// Relative tolerance for derivative jumps of order >= 1.
    double tol_jump = 1e-6;
    /// Relative tolerance for the restart value (order-0 comparison).
    double tol_consistency = 1e-7;
    /// Trailing Chebyshev coefficients below this fraction are dropped.
    double chop_tol = 1e-13;
    OnInconsistent on_inconsistent = OnInconsistent::Record;
};

///
/// x^[i] on the local interval [0, tau] as contiguous Chebyshev pieces.
/// Interior piece boundaries come from knots of the data.
///
template <typename Scalar>
struct SegmentSolution
{
    /// 0 for the history, 1 .. M for solution segments.
    int index = 0;
    double tau = 0.0;
    std::vector<ChebPiece<Scalar>> pieces;
    /// |x^[i](0) - x^[i-1](tau)|.
    double consistency_residual = 0.0;

    Index dim() const { return pieces.empty() ? 0 : pieces.front().dim(); }
    std::size_t locate(double s, Side side) const;
    Vector<Scalar> evaluate(double s, int order = 0,
                            Side side = Side::Right) const;
    /// Local piece boundaries including 0 and tau.
    std::vector<double> breakpoints() const;
    /// M x^[i] piece by piece.
    SegmentSolution transformed(const Matrix<Scalar>& M) const;
};

template <typename Scalar>
struct Trajectory
{
    double tau = 0.0;
    Index n = 0;
    /// x^[0](s) = phi(s - tau).
    SegmentSolution<Scalar> history;
    std::vector<SegmentSolution<Scalar>> segments;

    double end_time() const { return tau * static_cast<double>(segments.size()); }
    /// x(t) for t in [-tau, end_time()]; the side selects the segment at
    /// knots.
    Vector<Scalar> evaluate(double t, int order = 0,
                            Side side = Side::Right) const;
};

template <typename Scalar>
struct KnotEntry
{
    /// Knot t = knot * tau, comparing x^[knot] at tau with x^[knot+1] at 0.
    int knot = 0;
    double t = 0.0;
    /// Largest j with matching derivatives up to order j; -1 if the values
    /// already differ.
    int matched_order = 0;
    std::optional<int> first_jump_order;
    /// x^(k)(t-) - x^(k)(t+) at the first jump order.
    Vector<Scalar> jump_vector;
    double jump_norm = 0.0;
    bool inconsistent_restart = false;
};

template <typename Scalar>
struct JumpLedger
{
    int k_max = 0;
    std::vector<KnotEntry<Scalar>> entries;
};

template <typename Scalar>
struct SolveResult
{
    Trajectory<Scalar> trajectory;
    JumpLedger<Scalar> ledger;
    bool completed = false;
    /// Segment whose restart failed (record mode only).
    std::optional<int> breakdown_segment;
    double breakdown_residual = 0.0;
};

/// x^[0] from the history.
template <typename Scalar>
SegmentSolution<Scalar> history_segment(const DdaeSystem<Scalar>& sys);

/// Builds x^[i] from x^[i-1] without judging consistency. The slow part
/// starts from the continuity value T^{-1} x^[i-1](tau).
template <typename Scalar>
SegmentSolution<Scalar> assemble_segment(const DdaeSystem<Scalar>& sys,
                                         const SplitCoefficients<Scalar>& split,
                                         int i,
                                         const SegmentSolution<Scalar>& prev,
                                         const SolverConfig& config = {});

/// assemble_segment plus the restart check; throws InconsistentRestart.
template <typename Scalar>
SegmentSolution<Scalar> solve_segment(const DdaeSystem<Scalar>& sys,
                                      const SplitCoefficients<Scalar>& split,
                                      int i,
                                      const SegmentSolution<Scalar>& prev,
                                      const SolverConfig& config = {});

/// Throws NotAdmissible for a history violating the consistency condition
/// of the first segment, and InconsistentRestart in Stop mode.
template <typename Scalar>
SolveResult<Scalar> method_of_steps(const DdaeSystem<Scalar>& sys,
                                    const SplitCoefficients<Scalar>& split,
                                    const SolverConfig& config = {});

template <typename Scalar>
KnotEntry<Scalar> detect_jumps(const SegmentSolution<Scalar>& left,
                               const SegmentSolution<Scalar>& right,
                               int k_max, double tol_jump,
                               double tol_consistency);

/// Solves v' = J v + r on the Chebyshev piece of r with v(a) = v0.
/// Integral-form collocation; returns a piece of degree p.
template <typename Scalar>
ChebPiece<Scalar> integrate_linear_piece(const Matrix<Scalar>& J,
                                         const ChebPiece<Scalar>& r,
                                         const Vector<Scalar>& v0, int p);

/// max_k |E x' - A x - q| over the mapped Lobatto nodes of segment i,
/// with q = D x^[i-1] + f.
template <typename Scalar>
double dae_residual(const DdaeSystem<Scalar>& sys,
                    const SegmentSolution<Scalar>& seg,
                    const SegmentSolution<Scalar>& prev, int nodes = 32);

} // namespace ddae

#endif
