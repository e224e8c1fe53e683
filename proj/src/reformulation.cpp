#include "ddae/reformulation.hpp"

#include <algorithm>
#include <functional>

#include "ddae/classification.hpp"
#include "ddae/errors.hpp"

namespace ddae
{

template <typename Scalar>
std::vector<double> HiddenDelayExpansion<Scalar>::delays() const
{
    std::vector<double> out;
    for (int k = 0; k <= nu_D; ++k)
        out.push_back((k + 1) * tau);
    return out;
}

template <typename Scalar>
HiddenDelayExpansion<Scalar>
expand_hidden_delays(const SplitCoefficients<Scalar>& split,
                     int horizon_intervals, const RankPolicy& policy)
{
    const auto cls = classify_propagation(split, horizon_intervals, policy);
    if (cls.kind != PropagationKind::Smoothing)
        throw NotSmoothingType("hidden-delay expansion needs a smoothing-type system");

    HiddenDelayExpansion<Scalar> out;
    out.nu_D = cls.nu_D.value_or(0);
    out.tau = -split.psi.start();
    out.horizon_intervals = horizon_intervals;
    out.J = split.qwf.J;

    const Index n_a = split.n_a();
    out.D.push_back(split.B_d1);
    Matrix<Scalar> power = Matrix<Scalar>::Identity(n_a, n_a);
    for (int k = 1; k <= out.nu_D; ++k)
    {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        out.D.push_back(Scalar(sign) * split.B_d2 * power * split.B_a1);
        power = power * split.B_a2;
    }

    // h_hat = sum_{k<nu} N^k h^(k) so that w = -B_a1 v_tau - B_a2 w_tau - h_hat.
    PiecewisePolynomial<Scalar> h_hat = split.h;
    Matrix<Scalar> N_power = Matrix<Scalar>::Identity(n_a, n_a);
    for (int k = 1; k < split.nu(); ++k)
    {
        N_power = N_power * split.qwf.N;
        h_hat = h_hat + split.h.derivative(k).transformed(N_power);
    }

    const double start = out.nu_D * out.tau;
    const double end = horizon_intervals * out.tau;
    out.theta = split.g.restricted(start, end);
    power = Matrix<Scalar>::Identity(n_a, n_a);
    for (int k = 0; k < out.nu_D; ++k)
    {
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;
        const Matrix<Scalar> M = Scalar(sign) * split.B_d2 * power;
        const auto shifted = h_hat.shifted((k + 1) * out.tau).restricted(start, end);
        out.theta = out.theta + shifted.transformed(M);
        power = power * split.B_a2;
    }
    return out;
}

template <typename Scalar>
Trajectory<Scalar>
solve_hidden_delay_dde(const HiddenDelayExpansion<Scalar>& expansion,
                       const DdaeSystem<Scalar>& sys,
                       const SplitCoefficients<Scalar>& split,
                       const SolverConfig& config)
{
    const double tau = expansion.tau;
    const int M = expansion.horizon_intervals;
    const int nu_D = expansion.nu_D;
    const Index n_d = expansion.J.rows();
    const Matrix<Scalar> to_slow = split.qwf.T_inv.topRows(n_d);

    Trajectory<Scalar> out;
    out.tau = tau;
    out.n = n_d;
    out.history = history_segment(sys).transformed(to_slow);
    if (nu_D > 0)
    {
        const auto short_sys = sys.with_horizon(nu_D);
        const auto direct = method_of_steps(short_sys, build_split(short_sys), config);
        if (!direct.completed)
            throw InconsistentRestart(*direct.breakdown_segment, direct.breakdown_residual);
        for (const auto& seg : direct.trajectory.segments)
            out.segments.push_back(seg.transformed(to_slow));
    }

    auto z_segment = [&](int l) -> const SegmentSolution<Scalar>&
    { return l == 0 ? out.history : out.segments[l - 1]; };

    for (int j = nu_D + 1; j <= M; ++j)
    {
        const double t0 = (j - 1) * tau;
        std::vector<double> knots{0.0, tau};
        const double tol = 1e-12 * tau * (1.0 + j);
        for (int k = 0; k <= nu_D; ++k)
            knots = merge_knots(knots, z_segment(j - k - 1).breakpoints(), tol);
        std::vector<double> theta_knots;
        for (double bp : expansion.theta.breakpoints())
            if (bp > t0 && bp < t0 + tau)
                theta_knots.push_back(bp - t0);
        knots = merge_knots(knots, theta_knots, tol);
        knots.front() = 0.0;
        knots.back() = tau;

        SegmentSolution<Scalar> seg;
        seg.index = j;
        seg.tau = tau;
        Vector<Scalar> v0 = z_segment(j - 1).evaluate(tau, 0, Side::Left);
        for (std::size_t p = 0; p + 1 < knots.size(); ++p)
        {
            const double a = knots[p];
            const double b = knots[p + 1];
            if (n_d == 0)
            {
                seg.pieces.push_back(ChebPiece<Scalar>{a, b, Matrix<Scalar>(0, 1)});
                continue;
            }
            const double mid = 0.5 * (a + b);
            std::vector<const ChebPiece<Scalar>*> delayed;
            int degree = config.degree;
            for (int k = 0; k <= nu_D; ++k)
            {
                const auto& z = z_segment(j - k - 1);
                delayed.push_back(&z.pieces[z.locate(mid, Side::Right)]);
                degree = std::max(degree, delayed.back()->degree());
            }
            const std::size_t kt = expansion.theta.locate(t0 + mid, Side::Right);
            degree = std::max(degree, static_cast<int>(
                                          expansion.theta.pieces()[kt].coeffs.size()) - 1);
            const auto& theta_piece = expansion.theta.pieces()[kt];
            const std::function<Vector<Scalar>(double)> forcing = [&](double s)
            {
                const double u = t0 + s - theta_piece.start;
                Vector<Scalar> r = Vector<Scalar>::Zero(n_d);
                for (auto c = theta_piece.coeffs.rbegin(); c != theta_piece.coeffs.rend(); ++c)
                    r = r * Scalar(u) + *c;
                for (int k = 0; k <= nu_D; ++k)
                    r += expansion.D[k] * delayed[k]->evaluate(s);
                return r;
            };
            const auto r = cheb_interpolate<Scalar>(a, b, degree, n_d, forcing);
            auto piece = integrate_linear_piece(expansion.J, r, v0, degree);
            v0 = piece.evaluate(b);
            chop(piece, config.chop_tol);
            seg.pieces.push_back(std::move(piece));
        }
        out.segments.push_back(std::move(seg));
    }
    return out;
}

template <typename Scalar>
DdaeSystem<Scalar>
embed_neutral_dde(const Matrix<Scalar>& A_hat, const Matrix<Scalar>& D_hat,
                  const Matrix<Scalar>& B_hat, double tau,
                  int horizon_intervals, const PiecewisePolynomial<Scalar>& f,
                  const std::optional<PiecewisePolynomial<Scalar>>& phi)
{
    const Index n = A_hat.rows();
    if (A_hat.cols() != n || D_hat.rows() != n || D_hat.cols() != n ||
        B_hat.rows() != n || B_hat.cols() != n || f.dim() != n)
        throw DimensionMismatch("neutral DDE matrices must be n x n");
    const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
    const Matrix<Scalar> Z = Matrix<Scalar>::Zero(n, n);

    Matrix<Scalar> E(2 * n, 2 * n), A(2 * n, 2 * n), D(2 * n, 2 * n);
    E << I, -B_hat, Z, Z;
    A << A_hat, Z, Z, I;
    D << D_hat, Z, -I, Z;
    Matrix<Scalar> lift(2 * n, n);
    lift << I, Z;
    return DdaeSystem<Scalar>(
        E, A, D, tau, horizon_intervals, f.transformed(lift),
        phi ? *phi : PiecewisePolynomial<Scalar>::zero(-tau, 0.0, 2 * n));
}

template <typename Scalar>
DdaeSystem<Scalar>
embed_pure_delay(const Matrix<Scalar>& D, const Matrix<Scalar>& B, double tau,
                 int horizon_intervals, const PiecewisePolynomial<Scalar>& f,
                 const std::optional<PiecewisePolynomial<Scalar>>& phi)
{
    const Index n = D.rows();
    if (D.cols() != n || B.rows() != n || B.cols() != n || f.dim() != n)
        throw DimensionMismatch("delay matrices must be n x n");
    const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
    const Matrix<Scalar> Z = Matrix<Scalar>::Zero(n, n);

    Matrix<Scalar> E(2 * n, 2 * n), A(2 * n, 2 * n), Dd(2 * n, 2 * n);
    E << Z, -B, Z, Z;
    A << -I, D, Z, I;
    Dd << Z, Z, -I, Z;
    Matrix<Scalar> lift(2 * n, n);
    lift << I, Z;
    return DdaeSystem<Scalar>(
        E, A, Dd, tau, horizon_intervals, f.transformed(lift),
        phi ? *phi : PiecewisePolynomial<Scalar>::zero(-tau, 0.0, 2 * n));
}

#define DDAE_INSTANTIATE(S)                                                   \
    template struct HiddenDelayExpansion<S>;                                  \
    template HiddenDelayExpansion<S> expand_hidden_delays<S>(                 \
        const SplitCoefficients<S>&, int, const RankPolicy&);                 \
    template Trajectory<S> solve_hidden_delay_dde<S>(                         \
        const HiddenDelayExpansion<S>&, const DdaeSystem<S>&,                 \
        const SplitCoefficients<S>&, const SolverConfig&);                    \
    template DdaeSystem<S> embed_neutral_dde<S>(                              \
        const Matrix<S>&, const Matrix<S>&, const Matrix<S>&, double, int,    \
        const PiecewisePolynomial<S>&,                                        \
        const std::optional<PiecewisePolynomial<S>>&);                        \
    template DdaeSystem<S> embed_pure_delay<S>(                               \
        const Matrix<S>&, const Matrix<S>&, double, int,                      \
        const PiecewisePolynomial<S>&,                                        \
        const std::optional<PiecewisePolynomial<S>>&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
