#include "ddae/history.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ddae/errors.hpp"

namespace ddae
{

namespace
{

double binomial(int n, int k)
{
    double out = 1.0;
    for (int i = 1; i <= k; ++i)
        out = out * (n - k + i) / i;
    return out;
}

double falling(int n, int k)
{
    double out = 1.0;
    for (int i = 0; i < k; ++i)
        out *= n - i;
    return out;
}

// q^(j)(0) for the first segment, q = D phi(. - tau) + f.
template <typename Scalar>
Vector<Scalar> q_derivative(const DdaeSystem<Scalar>& sys, int j)
{
    return sys.D() * sys.phi().evaluate(-sys.tau(), j, Side::Right) +
           sys.f().evaluate(0.0, j, Side::Right);
}

ConditionCheck compare(double residual, double lhs_norm, double rhs_norm)
{
    ConditionCheck c;
    c.residual = residual;
    c.threshold = 1e-8 * (1.0 + std::max(lhs_norm, rhs_norm));
    c.satisfied = residual <= c.threshold;
    return c;
}

template <typename Scalar>
ConditionCheck compare(const Vector<Scalar>& lhs, const Vector<Scalar>& rhs)
{
    return compare((lhs - rhs).norm(), lhs.norm(), rhs.norm());
}

template <typename Scalar>
Vector<Scalar> random_vector(Index n, std::mt19937_64* rng)
{
    Vector<Scalar> v = Vector<Scalar>::Zero(n);
    if (rng == nullptr)
        return v;
    std::normal_distribution<double> dist;
    for (Index i = 0; i < n; ++i)
    {
        if constexpr (is_complex_v<Scalar>)
        {
            const double re = dist(*rng);
            v(i) = Scalar(re, dist(*rng));
        }
        else
        {
            v(i) = dist(*rng);
        }
    }
    return v;
}

} // namespace

template <typename Scalar>
ConditionCheck check_admissible(const DdaeSystem<Scalar>& sys,
                                const SplitCoefficients<Scalar>& split)
{
    const Vector<Scalar> phi0 = sys.phi().evaluate(0.0, 0, Side::Left);
    Vector<Scalar> rhs = split.A_con * phi0;
    for (int k = 1; k <= split.nu(); ++k)
        rhs += split.C[k] * q_derivative(sys, k - 1);
    return compare<Scalar>(phi0, rhs);
}

template <typename Scalar>
ConditionCheck check_smoothness_condition(const DdaeSystem<Scalar>& sys,
                                          const SplitCoefficients<Scalar>& split)
{
    const Vector<Scalar> lhs = sys.phi().evaluate(0.0, 1, Side::Left);
    Vector<Scalar> rhs = split.A_diff * sys.phi().evaluate(0.0, 0, Side::Left);
    for (int k = 0; k <= split.nu(); ++k)
        rhs += split.C[k] * q_derivative(sys, k);
    return compare<Scalar>(lhs, rhs);
}

template <typename Scalar>
ConditionCheck check_second_splicing(const DdaeSystem<Scalar>& sys,
                                     const SplitCoefficients<Scalar>& split)
{
    const Vector<Scalar> lhs = sys.phi().evaluate(0.0, 2, Side::Left);
    Vector<Scalar> rhs = split.A_diff * sys.phi().evaluate(0.0, 1, Side::Left);
    for (int k = 0; k <= split.nu(); ++k)
        rhs += split.C[k] * q_derivative(sys, k + 1);
    auto c = compare<Scalar>(lhs, rhs);
    // The second-order condition only extends the first one.
    c.satisfied = c.satisfied && check_smoothness_condition(sys, split).satisfied;
    return c;
}

template <typename Scalar>
std::vector<Vector<Scalar>>
first_segment_derivatives(const DdaeSystem<Scalar>& sys,
                          const SplitCoefficients<Scalar>& split, int order)
{
    std::vector<Vector<Scalar>> out;
    Vector<Scalar> x = split.A_con * sys.phi().evaluate(0.0, 0, Side::Left);
    for (int k = 1; k <= split.nu(); ++k)
        x += split.C[k] * q_derivative(sys, k - 1);
    out.push_back(x);
    for (int j = 1; j <= order; ++j)
    {
        Vector<Scalar> next = split.A_diff * out.back();
        for (int k = 0; k <= split.nu(); ++k)
            next += split.C[k] * q_derivative(sys, k + j - 1);
        out.push_back(next);
    }
    return out;
}

template <typename Scalar>
int kappa_observed(const DdaeSystem<Scalar>& sys,
                   const SplitCoefficients<Scalar>& split)
{
    const int cap = split.nu() + 2;
    const auto x = first_segment_derivatives(sys, split, cap);
    int kappa = -1;
    for (int k = 0; k <= cap; ++k)
    {
        const Vector<Scalar> phi_k = sys.phi().evaluate(0.0, k, Side::Left);
        if (!compare<Scalar>(phi_k, x[k]).satisfied)
            break;
        kappa = k;
    }
    return kappa;
}

template <typename Scalar>
SplicingReport splicing_report(const DdaeSystem<Scalar>& sys,
                               const SplitCoefficients<Scalar>& split)
{
    SplicingReport r;
    r.admissible = check_admissible(sys, split);
    r.smooth_c1 = check_smoothness_condition(sys, split);
    r.smooth_c2 = check_second_splicing(sys, split);
    r.kappa_observed = r.admissible.satisfied ? kappa_observed(sys, split) : -1;
    return r;
}

template <typename Scalar>
Index3Check check_index3_uniqueness(const SplitCoefficients<Scalar>& split,
                                    const RankPolicy& policy)
{
    Index3Check c;
    const auto& N = split.qwf.N;
    const double block_scale = split.coupling_scale * split.qwf.T.norm();
    const double n_norm = N.norm();

    c.index_at_most_3 = split.nu() <= 3;
    c.n_b_a2_norm = (N * split.B_a2).norm();
    c.n_b_a2_zero = c.n_b_a2_norm <= n_norm * policy.threshold(block_scale);
    c.n2_b_a1_b_d2_norm = (N * N * split.B_a1 * split.B_d2).norm();
    c.n2_b_a1_b_d2_zero = c.n2_b_a1_b_d2_norm <=
                          n_norm * n_norm * policy.threshold(block_scale * block_scale);
    c.applicable = c.index_at_most_3 && c.n_b_a2_zero && c.n2_b_a1_b_d2_zero;
    return c;
}

template <typename Scalar>
std::vector<Vector<Scalar>>
hermite_two_point(double h, const std::vector<Vector<Scalar>>& left,
                  const std::vector<Vector<Scalar>>& right)
{
    if (left.size() != right.size() || left.empty())
        throw DimensionMismatch("Hermite data must have equal length at both ends");
    const int r = static_cast<int>(left.size()) - 1;
    const Index d = left.front().size();

    // Taylor part at the right end, in u = s - h.
    std::vector<Vector<Scalar>> cu(r + 1);
    double fact = 1.0;
    for (int k = 0; k <= r; ++k)
    {
        if (k > 0)
            fact *= k;
        cu[k] = right[k] / Scalar(fact);
    }

    // Derivatives of u^{r+1} at u = -h.
    std::vector<double> cc(r + 1);
    for (int j = 0; j <= r; ++j)
        cc[j] = falling(r + 1, j) * std::pow(-h, r + 1 - j);

    // Correction (s - h)^{r+1} Q(s); Q^(k)(0) by forward substitution.
    std::vector<Vector<Scalar>> Q(r + 1);
    for (int k = 0; k <= r; ++k)
    {
        Vector<Scalar> pk = Vector<Scalar>::Zero(d);
        for (int j = k; j <= r; ++j)
            pk += Scalar(falling(j, k) * std::pow(-h, j - k)) * cu[j];
        Vector<Scalar> acc = left[k] - pk;
        for (int i = 0; i < k; ++i)
            acc -= Scalar(binomial(k, i) * cc[k - i]) * Q[i];
        Q[k] = acc / Scalar(cc[0]);
    }

    std::vector<Vector<Scalar>> out = taylor_shift(cu, -h);
    out.resize(2 * r + 2, Vector<Scalar>::Zero(d));
    fact = 1.0;
    for (int i = 0; i <= r; ++i)
    {
        if (i > 0)
            fact *= i;
        const Vector<Scalar> qi = Q[i] / Scalar(fact);
        for (int j = 0; j <= r + 1; ++j)
        {
            const double bj = binomial(r + 1, j) * std::pow(-h, r + 1 - j);
            out[i + j] += Scalar(bj) * qi;
        }
    }
    return out;
}

template <typename Scalar>
PiecewisePolynomial<Scalar>
construct_probe_history(const SplitCoefficients<Scalar>& split, int m,
                        const Vector<Scalar>& target, ProbeSide side,
                        const ProbeOptions& options)
{
    const int nu = split.nu();
    if (m < 1)
        throw MalformedInput("probe order m must be at least 1");
    if (nu + m > probe_order_limit)
        throw MalformedInput("probe order m + nu exceeds " +
                             std::to_string(probe_order_limit));
    const Index n_d = split.n_d();
    const Index n_a = split.n_a();
    if (target.size() != (side == ProbeSide::Slow ? n_d : n_a))
        throw DimensionMismatch("probe target does not match the chosen block");

    const double tau = -split.psi.start();
    const int r = nu + m;
    const auto& Q = split.qwf;

    std::optional<std::mt19937_64> engine;
    if (options.seed)
        engine.emplace(*options.seed);
    std::mt19937_64* rng = engine ? &*engine : nullptr;

    // derivatives at -tau stay zero; a seed only moves the value there
    std::vector<Vector<Scalar>> psi_left(r + 1, Vector<Scalar>::Zero(n_d));
    std::vector<Vector<Scalar>> eta_left(r + 1, Vector<Scalar>::Zero(n_a));
    psi_left[0] = random_vector<Scalar>(n_d, rng);
    eta_left[0] = random_vector<Scalar>(n_a, rng);

    auto q_d = [&](int j)
    {
        return Vector<Scalar>(split.B_d1 * psi_left[j] + split.B_d2 * eta_left[j] +
                              split.g.evaluate(0.0, j, Side::Right));
    };
    auto q_a = [&](int j)
    {
        return Vector<Scalar>(split.B_a1 * psi_left[j] + split.B_a2 * eta_left[j] +
                              split.h.evaluate(0.0, j, Side::Right));
    };

    std::vector<Vector<Scalar>> psi_right(r + 1), eta_right(r + 1);
    psi_right[0] = random_vector<Scalar>(n_d, rng);
    for (int j = 0; j < m; ++j)
        psi_right[j + 1] = Q.J * psi_right[j] + q_d(j);
    for (int j = 0; j <= m; ++j)
    {
        Vector<Scalar> w = Vector<Scalar>::Zero(n_a);
        Matrix<Scalar> N_power = Matrix<Scalar>::Identity(n_a, n_a);
        for (int k = 0; k < nu; ++k)
        {
            w -= N_power * q_a(k + j);
            N_power = N_power * Q.N;
        }
        eta_right[j] = w;
    }
    for (int j = m + 1; j <= r; ++j)
    {
        psi_right[j] = random_vector<Scalar>(n_d, rng);
        eta_right[j] = random_vector<Scalar>(n_a, rng);
    }
    if (side == ProbeSide::Slow)
        psi_right[m] += target;
    else
        eta_right[m] += target;

    const auto psi = hermite_two_point(tau, psi_left, psi_right);
    const auto eta = hermite_two_point(tau, eta_left, eta_right);
    std::vector<Vector<Scalar>> coeffs(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j)
        coeffs[j] = Q.T.leftCols(n_d) * psi[j] + Q.T.rightCols(n_a) * eta[j];
    return PiecewisePolynomial<Scalar>::single(-tau, 0.0, std::move(coeffs));
}

#define DDAE_INSTANTIATE(S)                                                   \
    template ConditionCheck check_admissible<S>(const DdaeSystem<S>&,         \
                                                const SplitCoefficients<S>&); \
    template ConditionCheck check_smoothness_condition<S>(                    \
        const DdaeSystem<S>&, const SplitCoefficients<S>&);                   \
    template ConditionCheck check_second_splicing<S>(                         \
        const DdaeSystem<S>&, const SplitCoefficients<S>&);                   \
    template std::vector<Vector<S>> first_segment_derivatives<S>(             \
        const DdaeSystem<S>&, const SplitCoefficients<S>&, int);              \
    template int kappa_observed<S>(const DdaeSystem<S>&,                      \
                                   const SplitCoefficients<S>&);              \
    template SplicingReport splicing_report<S>(const DdaeSystem<S>&,          \
                                               const SplitCoefficients<S>&);  \
    template Index3Check check_index3_uniqueness<S>(                          \
        const SplitCoefficients<S>&, const RankPolicy&);                      \
    template std::vector<Vector<S>> hermite_two_point<S>(                     \
        double, const std::vector<Vector<S>>&, const std::vector<Vector<S>>&); \
    template PiecewisePolynomial<S> construct_probe_history<S>(               \
        const SplitCoefficients<S>&, int, const Vector<S>&, ProbeSide,        \
        const ProbeOptions&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
