#ifndef DDAE_CLASSIFICATION_HPP
#define DDAE_CLASSIFICATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "ddae/model.hpp"

namespace ddae
{

enum class PropagationKind
{
    Smoothing,
    DiscontinuityInvariant,
    DeSmoothing
};

enum class LegacyKind
{
    Retarded,
    Neutral,
    Advanced
};

std::string to_string(PropagationKind kind);
std::string to_string(LegacyKind kind);

/// How primary discontinuities travel through the knots i*tau.
///
/// For index >= 2 the smoothing and de-smoothing conditions are sufficient
/// conditions only; the evidence norms in ClassificationReport allow
/// auditing borderline calls.
struct PropagationClass
{
    PropagationKind kind = PropagationKind::DiscontinuityInvariant;
    /// Nilpotency index of B_a2, present iff B_a2 is nilpotent.
    std::optional<int> nu_D;
    /// Smallest k >= 1 with N^k B_a != 0 (de-smoothing only).
    std::optional<int> first_violating_k;
    /// B_a2 is nilpotent but nu_D >= M: smoothing would need a longer
    /// horizon.
    bool horizon_dependent_note = false;
};

struct LegacyClass
{
    LegacyKind kind = LegacyKind::Retarded;
};

struct ClassificationEvidence
{
    /// |N^k B_a|_F for k = 0 .. nu-1.
    std::vector<double> n_power_b_a;
    /// |B_a2^k|_F for k = 1 .. n_a.
    std::vector<double> b_a2_power;
    /// Zero threshold for |B_a|; the threshold for |N^k B_a| is
    /// |N|^k times this value.
    double coupling_threshold = 0.0;
    double n_norm = 0.0;
};

struct ClassificationReport
{
    PropagationClass propagation;
    LegacyClass legacy;
    ClassificationEvidence evidence;
    /// (legacy == Advanced) <=> (propagation == DeSmoothing).
    bool consistency_flag = true;
};

template <typename Scalar>
PropagationClass classify_propagation(const SplitCoefficients<Scalar>& split,
                                      int horizon_intervals,
                                      const RankPolicy& policy = {});

template <typename Scalar>
LegacyClass classify_legacy(const SplitCoefficients<Scalar>& split,
                            const RankPolicy& policy = {});

template <typename Scalar>
ClassificationEvidence
classification_evidence(const SplitCoefficients<Scalar>& split,
                        const RankPolicy& policy = {});

/// Runs both classifications and the cross check.
template <typename Scalar>
ClassificationReport classify(const SplitCoefficients<Scalar>& split,
                              int horizon_intervals,
                              const RankPolicy& policy = {});

/// Writes a diagnostics dump to stderr when the check fails.
bool cross_check(const ClassificationReport& report);

/// Nilpotency of B_a2 judged on the normalized matrix; a B_a2 below the
/// coupling threshold is treated as zero (index 1).
template <typename Scalar>
Nilpotency b_a2_nilpotency(const SplitCoefficients<Scalar>& split,
                           const RankPolicy& policy = {});

///
/// Time-reversed system in dimension 2n:
///   [[0, E], [0, 0]] zeta' = [[-D, 0], [0, I]] zeta
///                            + [[-A, 0], [-I, 0]] zeta(t - tau) + F.
///
template <typename Scalar>
struct BackwardSystem
{
    Matrix<Scalar> E, A, B;
    RegularityVerdict regularity;
    /// Built with zero placeholder data when the pencil is regular.
    std::optional<DdaeSystem<Scalar>> system;
    std::optional<ClassificationReport> classification;
};

template <typename Scalar>
BackwardSystem<Scalar> build_backward_system(const DdaeSystem<Scalar>& sys,
                                             const RankPolicy& policy = {});

} // namespace ddae

#endif
