#include "ddae/classification.hpp"

#include <cmath>
#include <iostream>

namespace ddae
{

std::string to_string(PropagationKind kind)
{
    switch (kind)
    {
    case PropagationKind::Smoothing:
        return "smoothing";
    case PropagationKind::DiscontinuityInvariant:
        return "discontinuity_invariant";
    case PropagationKind::DeSmoothing:
        return "de_smoothing";
    }
    return "unknown";
}

std::string to_string(LegacyKind kind)
{
    switch (kind)
    {
    case LegacyKind::Retarded:
        return "retarded";
    case LegacyKind::Neutral:
        return "neutral";
    case LegacyKind::Advanced:
        return "advanced";
    }
    return "unknown";
}

namespace
{

double power_threshold(const ClassificationEvidence& ev, int k)
{
    return std::pow(ev.n_norm, static_cast<double>(k)) * ev.coupling_threshold;
}

// N^k B_a is judged against |N|^k times the B_a threshold, so a vanishing
// N^k B_a forces N^{k+1} B_a to vanish as well.
std::optional<int> first_nonzero_power(const ClassificationEvidence& ev)
{
    for (std::size_t k = 1; k < ev.n_power_b_a.size(); ++k)
    {
        if (ev.n_power_b_a[k] > power_threshold(ev, static_cast<int>(k)))
            return static_cast<int>(k);
    }
    return std::nullopt;
}

} // namespace

template <typename Scalar>
ClassificationEvidence
classification_evidence(const SplitCoefficients<Scalar>& split,
                        const RankPolicy& policy)
{
    ClassificationEvidence ev;
    ev.coupling_threshold = policy.threshold(split.coupling_scale);
    ev.n_norm = split.qwf.N.norm();

    Matrix<Scalar> prod = split.B_a;
    for (int k = 0; k < split.nu(); ++k)
    {
        ev.n_power_b_a.push_back(prod.norm());
        prod = split.qwf.N * prod;
    }
    Matrix<Scalar> power = split.B_a2;
    for (Index k = 1; k <= split.n_a(); ++k)
    {
        ev.b_a2_power.push_back(power.norm());
        power = power * split.B_a2;
    }
    return ev;
}

template <typename Scalar>
Nilpotency b_a2_nilpotency(const SplitCoefficients<Scalar>& split,
                           const RankPolicy& policy)
{
    if (split.n_a() == 0)
        return {true, 0};
    const double norm = split.B_a2.norm();
    if (norm <= policy.threshold(split.coupling_scale * split.qwf.T.norm()))
        return {true, 1};
    const Matrix<Scalar> normalized = split.B_a2 / Scalar(norm);
    return nilpotency_index<Scalar>(normalized, policy);
}

template <typename Scalar>
PropagationClass classify_propagation(const SplitCoefficients<Scalar>& split,
                                      int horizon_intervals,
                                      const RankPolicy& policy)
{
    PropagationClass out;
    if (split.nu() == 0)
    {
        out.kind = PropagationKind::Smoothing;
        out.nu_D = 0;
        return out;
    }

    const auto ev = classification_evidence(split, policy);
    if (auto k = first_nonzero_power(ev))
    {
        out.kind = PropagationKind::DeSmoothing;
        out.first_violating_k = *k;
    }

    const Nilpotency nil = b_a2_nilpotency(split, policy);
    if (nil.nilpotent)
        out.nu_D = *nil.index;

    if (out.kind == PropagationKind::DeSmoothing)
        return out;

    if (out.nu_D && *out.nu_D < horizon_intervals)
    {
        out.kind = PropagationKind::Smoothing;
    }
    else
    {
        out.kind = PropagationKind::DiscontinuityInvariant;
        out.horizon_dependent_note = out.nu_D.has_value();
    }
    return out;
}

template <typename Scalar>
LegacyClass classify_legacy(const SplitCoefficients<Scalar>& split,
                            const RankPolicy& policy)
{
    const auto ev = classification_evidence(split, policy);
    LegacyClass out;
    if (split.n_a() == 0 || ev.n_power_b_a.empty() ||
        ev.n_power_b_a[0] <= ev.coupling_threshold)
    {
        out.kind = LegacyKind::Retarded;
    }
    else if (ev.n_power_b_a.size() >= 2 &&
             ev.n_power_b_a[1] > power_threshold(ev, 1))
    {
        out.kind = LegacyKind::Advanced;
    }
    else
    {
        out.kind = LegacyKind::Neutral;
    }
    return out;
}

template <typename Scalar>
ClassificationReport classify(const SplitCoefficients<Scalar>& split,
                              int horizon_intervals, const RankPolicy& policy)
{
    ClassificationReport report;
    report.propagation = classify_propagation(split, horizon_intervals, policy);
    report.legacy = classify_legacy(split, policy);
    report.evidence = classification_evidence(split, policy);
    report.consistency_flag = cross_check(report);
    return report;
}

bool cross_check(const ClassificationReport& report)
{
    const bool advanced = report.legacy.kind == LegacyKind::Advanced;
    const bool desmoothing =
        report.propagation.kind == PropagationKind::DeSmoothing;
    if (advanced == desmoothing)
        return true;

    std::cerr << "classification cross-check failed: legacy="
              << to_string(report.legacy.kind)
              << " propagation=" << to_string(report.propagation.kind)
              << "\n  |N^k B_a|:";
    for (double v : report.evidence.n_power_b_a)
        std::cerr << ' ' << v;
    std::cerr << "\n  coupling threshold: "
              << report.evidence.coupling_threshold
              << "  |N|: " << report.evidence.n_norm
              << "\n  (threshold sensitivity suspected)\n";
    return false;
}

template <typename Scalar>
BackwardSystem<Scalar> build_backward_system(const DdaeSystem<Scalar>& sys,
                                             const RankPolicy& policy)
{
    const Index n = sys.n();
    const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
    const Matrix<Scalar> Z = Matrix<Scalar>::Zero(n, n);

    BackwardSystem<Scalar> out;
    out.E.resize(2 * n, 2 * n);
    out.A.resize(2 * n, 2 * n);
    out.B.resize(2 * n, 2 * n);
    out.E << Z, sys.E(), Z, Z;
    out.A << -sys.D(), Z, Z, I;
    out.B << -sys.A(), Z, -I, Z;

    out.regularity =
        check_regularity(MatrixPencil<Scalar>(out.E, out.A), policy);
    if (!out.regularity.regular)
        return out;

    const double tf = sys.final_time();
    out.system.emplace(
        out.E, out.A, out.B, sys.tau(), sys.horizon_intervals(),
        PiecewisePolynomial<Scalar>::zero(0.0, tf, 2 * n),
        PiecewisePolynomial<Scalar>::zero(-sys.tau(), 0.0, 2 * n), policy);
    const auto split = build_split(*out.system, policy);
    out.classification = classify(split, sys.horizon_intervals(), policy);
    return out;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template ClassificationEvidence classification_evidence<S>(               \
        const SplitCoefficients<S>&, const RankPolicy&);                      \
    template Nilpotency b_a2_nilpotency<S>(const SplitCoefficients<S>&,       \
                                           const RankPolicy&);                \
    template PropagationClass classify_propagation<S>(                        \
        const SplitCoefficients<S>&, int, const RankPolicy&);                 \
    template LegacyClass classify_legacy<S>(const SplitCoefficients<S>&,      \
                                            const RankPolicy&);               \
    template ClassificationReport classify<S>(const SplitCoefficients<S>&,    \
                                              int, const RankPolicy&);        \
    template BackwardSystem<S> build_backward_system<S>(const DdaeSystem<S>&, \
                                                        const RankPolicy&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
