#include "ddae/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "ddae/errors.hpp"
#include "ddae/history.hpp"

namespace ddae
{

namespace
{

template <typename Scalar>
Vector<Scalar> eval_piece(const PiecewisePolynomial<Scalar>& p, std::size_t k,
                          double t)
{
    const auto& pc = p.pieces()[k];
    const Scalar s(t - pc.start);
    Vector<Scalar> acc = Vector<Scalar>::Zero(p.dim());
    for (std::size_t j = pc.coeffs.size(); j-- > 0;)
        acc = acc * s + pc.coeffs[j];
    return acc;
}

template <typename Scalar>
int piece_degree(const PiecewisePolynomial<Scalar>& p, std::size_t k)
{
    return static_cast<int>(p.pieces()[k].coeffs.size()) - 1;
}

template <typename Scalar>
Matrix<Scalar> padded(const Matrix<Scalar>& c, Index cols)
{
    Matrix<Scalar> out = Matrix<Scalar>::Zero(c.rows(), cols);
    const Index m = std::min(cols, c.cols());
    out.leftCols(m) = c.leftCols(m);
    return out;
}

} // namespace

template <typename Scalar>
std::size_t SegmentSolution<Scalar>::locate(double s, Side side) const
{
    const double tol = 1e-12 * tau;
    if (side == Side::Right)
    {
        for (std::size_t k = pieces.size(); k-- > 0;)
            if (s >= pieces[k].a - tol)
                return k;
        return 0;
    }
    for (std::size_t k = 0; k < pieces.size(); ++k)
        if (s <= pieces[k].b + tol)
            return k;
    return pieces.size() - 1;
}

template <typename Scalar>
Vector<Scalar> SegmentSolution<Scalar>::evaluate(double s, int order,
                                                 Side side) const
{
    return pieces[locate(s, side)].evaluate(s, order);
}

template <typename Scalar>
std::vector<double> SegmentSolution<Scalar>::breakpoints() const
{
    std::vector<double> out;
    for (const auto& p : pieces)
        out.push_back(p.a);
    out.push_back(pieces.back().b);
    return out;
}

template <typename Scalar>
SegmentSolution<Scalar>
SegmentSolution<Scalar>::transformed(const Matrix<Scalar>& M) const
{
    SegmentSolution out = *this;
    for (auto& p : out.pieces)
        p.coeffs = M * p.coeffs;
    return out;
}

template <typename Scalar>
Vector<Scalar> Trajectory<Scalar>::evaluate(double t, int order, Side side) const
{
    const double tol = 1e-12 * tau * (1.0 + segments.size());
    if (t < -tol || (std::abs(t) <= tol && side == Side::Left) ||
        segments.empty())
        return history.evaluate(t + tau, order, side);
    int i = static_cast<int>(std::floor(t / tau));
    double s = t - i * tau;
    if (std::abs(s) <= tol && side == Side::Left && i > 0)
    {
        --i;
        s = tau;
    }
    else if (std::abs(s - tau) <= tol && side == Side::Right)
    {
        ++i;
        s = 0.0;
    }
    if (i >= static_cast<int>(segments.size()))
    {
        i = static_cast<int>(segments.size()) - 1;
        s = t - i * tau;
        if (s > tau * (1.0 + 1e-12))
            throw OutOfDomain("time beyond the computed trajectory");
        s = std::min(s, tau);
    }
    return segments[i].evaluate(s, order, side);
}

template <typename Scalar>
SegmentSolution<Scalar> history_segment(const DdaeSystem<Scalar>& sys)
{
    SegmentSolution<Scalar> seg;
    seg.index = 0;
    seg.tau = sys.tau();
    const auto& phi = sys.phi();
    for (std::size_t k = 0; k < phi.pieces().size(); ++k)
    {
        const auto& pc = phi.pieces()[k];
        auto piece = cheb_from_polynomial(phi, k, pc.start, pc.end);
        piece.a = pc.start + sys.tau();
        piece.b = pc.end + sys.tau();
        seg.pieces.push_back(std::move(piece));
    }
    seg.pieces.front().a = 0.0;
    seg.pieces.back().b = sys.tau();
    return seg;
}

template <typename Scalar>
ChebPiece<Scalar> integrate_linear_piece(const Matrix<Scalar>& J,
                                         const ChebPiece<Scalar>& r,
                                         const Vector<Scalar>& v0, int p)
{
    const Index d = J.rows();
    const Index m = p + 1;
    const double half = 0.5 * (r.b - r.a);
    const Matrix<double> K = cheb_integration_matrix(p);
    const Matrix<Scalar> R = padded<Scalar>(r.coeffs, m);

    // vec(c) with the component index running fastest.
    Matrix<Scalar> L = Matrix<Scalar>::Identity(d * m, d * m);
    for (Index k = 0; k < m; ++k)
        for (Index l = 0; l < m; ++l)
            if (K(k, l) != 0.0)
                L.block(k * d, l * d, d, d) -= Scalar(half * K(k, l)) * J;

    const Matrix<Scalar> RK = Scalar(half) * R * K.transpose().template cast<Scalar>();
    Vector<Scalar> rhs(d * m);
    for (Index k = 0; k < m; ++k)
        rhs.segment(k * d, d) = RK.col(k);
    rhs.head(d) += v0;

    const Eigen::PartialPivLU<Matrix<Scalar>> lu(L);
    const Vector<Scalar> sol = lu.solve(rhs);
    if (!sol.allFinite())
        throw CollocationSingular("collocation system is singular");

    ChebPiece<Scalar> out{r.a, r.b, Matrix<Scalar>(d, m)};
    for (Index k = 0; k < m; ++k)
        out.coeffs.col(k) = sol.segment(k * d, d);
    return out;
}

template <typename Scalar>
SegmentSolution<Scalar> assemble_segment(const DdaeSystem<Scalar>& sys,
                                         const SplitCoefficients<Scalar>& split,
                                         int i,
                                         const SegmentSolution<Scalar>& prev,
                                         const SolverConfig& config)
{
    const double tau = sys.tau();
    const double t0 = (i - 1) * tau;
    const Index n = sys.n();
    const Index n_d = split.n_d();
    const Index n_a = split.n_a();
    const auto& q = split.qwf;
    const auto& f = sys.f();

    std::vector<double> f_knots;
    for (double bp : f.breakpoints())
        if (bp > t0 && bp < t0 + tau)
            f_knots.push_back(bp - t0);
    const double tol = 1e-12 * tau * (1.0 + i);
    auto knots = merge_knots(prev.breakpoints(), f_knots, tol);
    knots.front() = 0.0;
    knots.back() = tau;

    const Matrix<Scalar> S_d = q.S.topRows(n_d);
    const Matrix<Scalar> S_a = q.S.bottomRows(n_a);
    const Matrix<Scalar> T_d = q.T.leftCols(n_d);
    const Matrix<Scalar> T_a = q.T.rightCols(n_a);

    SegmentSolution<Scalar> seg;
    seg.index = i;
    seg.tau = tau;
    Vector<Scalar> v0 = q.T_inv.topRows(n_d) * prev.evaluate(tau, 0, Side::Left);

    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    {
        const double a = knots[k];
        const double b = knots[k + 1];
        const double mid = 0.5 * (a + b);
        const auto& prev_piece = prev.pieces[prev.locate(mid, Side::Right)];
        const std::size_t kf = f.locate(t0 + mid, Side::Right);
        const int p = std::max({config.degree, prev_piece.degree(),
                                piece_degree(f, kf)});

        const std::function<Vector<Scalar>(double)> input = [&](double s)
        { return Vector<Scalar>(sys.D() * prev_piece.evaluate(s) + eval_piece(f, kf, t0 + s)); };
        ChebPiece<Scalar> qp = cheb_interpolate<Scalar>(a, b, p, n, input);
        chop(qp, config.chop_tol);

        Matrix<Scalar> x = Matrix<Scalar>::Zero(n, p + 1);
        if (n_d > 0)
        {
            const ChebPiece<Scalar> r{a, b, S_d * qp.coeffs};
            const ChebPiece<Scalar> v = integrate_linear_piece(q.J, r, v0, p);
            v0 = v.evaluate(b);
            x += T_d * v.coeffs;
        }
        if (n_a > 0)
        {
            ChebPiece<Scalar> qa{a, b, S_a * qp.coeffs};
            Matrix<Scalar> w = -padded<Scalar>(qa.coeffs, p + 1);
            Matrix<Scalar> N_power = Matrix<Scalar>::Identity(n_a, n_a);
            for (int j = 1; j < q.nu; ++j)
            {
                qa = qa.derivative(1);
                N_power = N_power * q.N;
                w -= N_power * padded<Scalar>(qa.coeffs, p + 1);
            }
            x += T_a * w;
        }
        ChebPiece<Scalar> piece{a, b, std::move(x)};
        chop(piece, config.chop_tol);
        seg.pieces.push_back(std::move(piece));
    }
    seg.consistency_residual =
        (seg.evaluate(0.0, 0, Side::Right) - prev.evaluate(tau, 0, Side::Left)).norm();
    return seg;
}

template <typename Scalar>
KnotEntry<Scalar> detect_jumps(const SegmentSolution<Scalar>& left,
                               const SegmentSolution<Scalar>& right,
                               int k_max, double tol_jump,
                               double tol_consistency)
{
    KnotEntry<Scalar> entry;
    entry.knot = left.index;
    entry.t = left.index * left.tau;
    entry.matched_order = -1;
    for (int k = 0; k <= k_max; ++k)
    {
        const Vector<Scalar> l = left.evaluate(left.tau, k, Side::Left);
        const Vector<Scalar> r = right.evaluate(0.0, k, Side::Right);
        const Vector<Scalar> d = l - r;
        const double tol = (k == 0 ? tol_consistency : tol_jump) *
                           (1.0 + std::max(l.norm(), r.norm()));
        if (d.norm() > tol)
        {
            entry.first_jump_order = k;
            entry.jump_vector = d;
            entry.jump_norm = d.norm();
            entry.inconsistent_restart = (k == 0);
            return entry;
        }
        entry.matched_order = k;
    }
    return entry;
}

template <typename Scalar>
SegmentSolution<Scalar> solve_segment(const DdaeSystem<Scalar>& sys,
                                      const SplitCoefficients<Scalar>& split,
                                      int i,
                                      const SegmentSolution<Scalar>& prev,
                                      const SolverConfig& config)
{
    auto seg = assemble_segment(sys, split, i, prev, config);
    const double scale = 1.0 + prev.evaluate(sys.tau(), 0, Side::Left).norm();
    if (seg.consistency_residual > config.tol_consistency * scale)
        throw InconsistentRestart(i, seg.consistency_residual);
    return seg;
}

template <typename Scalar>
SolveResult<Scalar> method_of_steps(const DdaeSystem<Scalar>& sys,
                                    const SplitCoefficients<Scalar>& split,
                                    const SolverConfig& config)
{
    const auto admissible = check_admissible(sys, split);
    if (!admissible.satisfied)
        throw NotAdmissible(admissible.residual);

    SolveResult<Scalar> result;
    result.ledger.k_max = config.k_max.value_or(split.nu() + 2);
    result.trajectory.tau = sys.tau();
    result.trajectory.n = sys.n();
    result.trajectory.history = history_segment(sys);

    const SegmentSolution<Scalar>* prev = &result.trajectory.history;
    result.trajectory.segments.reserve(sys.horizon_intervals());
    for (int i = 1; i <= sys.horizon_intervals(); ++i)
    {
        auto seg = assemble_segment(sys, split, i, *prev, config);
        auto entry = detect_jumps(*prev, seg, result.ledger.k_max,
                                  config.tol_jump, config.tol_consistency);
        result.ledger.entries.push_back(entry);
        if (entry.inconsistent_restart)
        {
            if (config.on_inconsistent == OnInconsistent::Stop)
                throw InconsistentRestart(i, seg.consistency_residual);
            result.breakdown_segment = i;
            result.breakdown_residual = seg.consistency_residual;
            return result;
        }
        result.trajectory.segments.push_back(std::move(seg));
        prev = &result.trajectory.segments.back();
    }
    result.completed = true;
    return result;
}

template <typename Scalar>
double dae_residual(const DdaeSystem<Scalar>& sys,
                    const SegmentSolution<Scalar>& seg,
                    const SegmentSolution<Scalar>& prev, int nodes)
{
    const double t0 = (seg.index - 1) * sys.tau();
    double worst = 0.0;
    const auto y = cgl_nodes(nodes);
    for (const auto& piece : seg.pieces)
    {
        const double mid = 0.5 * (piece.a + piece.b);
        const auto& pp = prev.pieces[prev.locate(mid, Side::Right)];
        const std::size_t kf = sys.f().locate(t0 + mid, Side::Right);
        const ChebPiece<Scalar> dx = piece.derivative(1);
        for (double yj : y)
        {
            const double s = 0.5 * (piece.a + piece.b) + 0.5 * (piece.b - piece.a) * yj;
            const Vector<Scalar> res = sys.E() * dx.evaluate(s) -
                                       sys.A() * piece.evaluate(s) -
                                       sys.D() * pp.evaluate(s) -
                                       eval_piece(sys.f(), kf, t0 + s);
            worst = std::max(worst, res.norm());
        }
    }
    return worst;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template struct SegmentSolution<S>;                                       \
    template struct Trajectory<S>;                                            \
    template SegmentSolution<S> history_segment<S>(const DdaeSystem<S>&);     \
    template ChebPiece<S> integrate_linear_piece<S>(                          \
        const Matrix<S>&, const ChebPiece<S>&, const Vector<S>&, int);        \
    template SegmentSolution<S> assemble_segment<S>(                          \
        const DdaeSystem<S>&, const SplitCoefficients<S>&, int,               \
        const SegmentSolution<S>&, const SolverConfig&);                      \
    template SegmentSolution<S> solve_segment<S>(                             \
        const DdaeSystem<S>&, const SplitCoefficients<S>&, int,               \
        const SegmentSolution<S>&, const SolverConfig&);                      \
    template KnotEntry<S> detect_jumps<S>(const SegmentSolution<S>&,          \
                                          const SegmentSolution<S>&, int,     \
                                          double, double);                    \
    template SolveResult<S> method_of_steps<S>(                               \
        const DdaeSystem<S>&, const SplitCoefficients<S>&,                    \
        const SolverConfig&);                                                 \
    template double dae_residual<S>(const DdaeSystem<S>&,                     \
                                    const SegmentSolution<S>&,                \
                                    const SegmentSolution<S>&, int);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
