#ifndef DDAE_HISTORY_HPP
#define DDAE_HISTORY_HPP

#include <cstdint>
#include <optional>

#include "ddae/model.hpp"

namespace ddae
{

/// Outcome of one splicing-type condition at t = 0.
struct ConditionCheck
{
    bool satisfied = false;
    double residual = 0.0;
    double threshold = 0.0;
};

struct SplicingReport
{
    ConditionCheck admissible;
    ConditionCheck smooth_c1;
    ConditionCheck smooth_c2;
    /// Largest kappa with phi^(k)(0) = x^(k)(0+) for k <= kappa, capped at
    /// nu + 2; -1 when the history is not admissible.
    int kappa_observed = -1;
};

/// phi(0) against the consistency condition of the first segment.
template <typename Scalar>
ConditionCheck check_admissible(const DdaeSystem<Scalar>& sys,
                                const SplitCoefficients<Scalar>& split);

/// phi'(0) = A_diff phi(0) + sum_k C_k q^(k)(0), q = D phi(. - tau) + f.
template <typename Scalar>
ConditionCheck check_smoothness_condition(const DdaeSystem<Scalar>& sys,
                                          const SplitCoefficients<Scalar>& split);

/// phi''(0) = A_diff phi'(0) + sum_k C_k q^(k+1)(0), summed to the index.
/// Reported as satisfied only when check_smoothness_condition also holds;
/// the residual is that of the second-order equation alone.
template <typename Scalar>
ConditionCheck check_second_splicing(const DdaeSystem<Scalar>& sys,
                                     const SplitCoefficients<Scalar>& split);

/// x^(j)(0+) of the first segment for j = 0 .. order, with the slow part
/// continued from phi(0).
template <typename Scalar>
std::vector<Vector<Scalar>>
first_segment_derivatives(const DdaeSystem<Scalar>& sys,
                          const SplitCoefficients<Scalar>& split, int order);

template <typename Scalar>
int kappa_observed(const DdaeSystem<Scalar>& sys,
                   const SplitCoefficients<Scalar>& split);

template <typename Scalar>
SplicingReport splicing_report(const DdaeSystem<Scalar>& sys,
                               const SplitCoefficients<Scalar>& split);

struct Index3Check
{
    bool applicable = false;
    bool index_at_most_3 = false;
    bool n_b_a2_zero = false;
    bool n2_b_a1_b_d2_zero = false;
    double n_b_a2_norm = 0.0;
    double n2_b_a1_b_d2_norm = 0.0;
};

template <typename Scalar>
Index3Check check_index3_uniqueness(const SplitCoefficients<Scalar>& split,
                                    const RankPolicy& policy = {});

enum class ProbeSide
{
    Slow,
    Fast
};

struct ProbeOptions
{
    /// Free Hermite values are zero unless a seed is given. A seed draws the
    /// value at -tau and the values at 0 above order m; derivatives at -tau
    /// stay zero. Seeded histories carry larger monomial coefficients, so
    /// high-order jumps are resolved less accurately.
    std::optional<std::uint64_t> seed;
};

/// Largest nu + m accepted by construct_probe_history.
inline constexpr int probe_order_limit = 10;

///
/// Single-piece history on [-tau, 0] of degree 2(nu + m) + 1 whose
/// transformed derivatives at 0 match the first solution segment up to
/// order m - 1 and miss it at order m by exactly the target on the chosen
/// side (target = psi^(m)(0) - v^(m)(0+) or eta^(m)(0) - w^(m)(0+)).
/// Throws MalformedInput for m < 1 or nu + m > probe_order_limit and
/// DimensionMismatch for a target of the wrong size.
///
template <typename Scalar>
PiecewisePolynomial<Scalar>
construct_probe_history(const SplitCoefficients<Scalar>& split, int m,
                        const Vector<Scalar>& target, ProbeSide side,
                        const ProbeOptions& options = {});

/// Two-point Hermite interpolant on [0, h] with derivatives 0 .. r given at
/// both ends; monomial coefficients in s.
template <typename Scalar>
std::vector<Vector<Scalar>>
hermite_two_point(double h, const std::vector<Vector<Scalar>>& left,
                  const std::vector<Vector<Scalar>>& right);

} // namespace ddae

#endif
