#include "ddae/stability.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ddae/classification.hpp"
#include "ddae/errors.hpp"

namespace ddae
{

namespace
{

constexpr int newton_max_iterations = 60;
constexpr double root_residual_tol = 1e-8;
constexpr double dedup_radius = 1e-6;

} // namespace

template <typename Scalar>
CharValue char_function(const Matrix<Scalar>& E, const Matrix<Scalar>& A,
                        const Matrix<Scalar>& D, double tau, Complex lambda)
{
    const Complex decay = std::exp(-lambda * tau);
    const Matrix<Complex> Ec = E.template cast<Complex>();
    const Matrix<Complex> Dc = D.template cast<Complex>();
    const Matrix<Complex> M = lambda * Ec - A.template cast<Complex>() - decay * Dc;
    const Matrix<Complex> dM = Ec + (tau * decay) * Dc;
    if (M.rows() == 0)
        return {Complex(1.0), Complex(0.0)};

    Eigen::PartialPivLU<Matrix<Complex>> lu(M);
    const Complex det = lu.determinant();
    if (det == Complex(0.0) || !std::isfinite(std::abs(det)))
        return {det, Complex(0.0)};
    return {det, det * lu.solve(dM).trace()};
}

template <typename Scalar>
CharValue char_function(const DdaeSystem<Scalar>& sys, Complex lambda)
{
    return char_function<Scalar>(sys.E(), sys.A(), sys.D(), sys.tau(), lambda);
}

template <typename Scalar>
double char_scale(const DdaeSystem<Scalar>& sys, Complex lambda)
{
    const double base = 1.0 + std::abs(lambda) * operator_norm(sys.E()) +
                        operator_norm(sys.A()) +
                        std::abs(std::exp(-lambda * sys.tau())) * operator_norm(sys.D());
    return std::pow(base, static_cast<double>(sys.n()));
}

template <typename Scalar>
SearchBox default_search_box(const DdaeSystem<Scalar>& sys)
{
    const double spread = (1.0 + operator_norm(sys.A()) + operator_norm(sys.D())) /
                          (1.0 + operator_norm(sys.E()));
    SearchBox box;
    box.re_min = -10.0 * spread;
    box.re_max = 5.0 * spread;
    box.im_max = 20.0 * std::numbers::pi / sys.tau();
    box.im_min = is_complex_v<Scalar> ? -box.im_max : 0.0;
    return box;
}

std::string to_string(StabilityGate gate)
{
    return gate == StabilityGate::Applicable ? "applicable" : "not_applicable_de_smoothing";
}

std::string to_string(StabilityVerdict verdict)
{
    switch (verdict)
    {
    case StabilityVerdict::Stable:
        return "stable";
    case StabilityVerdict::Unstable:
        return "unstable";
    case StabilityVerdict::Marginal:
        return "marginal";
    case StabilityVerdict::InconclusiveDeSmoothing:
        return "inconclusive_de_smoothing";
    case StabilityVerdict::InconclusiveBox:
        return "inconclusive_box";
    }
    return "unknown";
}

template <typename Scalar>
StabilityReport spectral_abscissa(const DdaeSystem<Scalar>& sys,
                                  const std::optional<SearchBox>& box_in)
{
    const SearchBox box = box_in ? *box_in : default_search_box(sys);
    if (!(box.re_max > box.re_min) || !(box.im_max > box.im_min) ||
        box.grid_re < 2 || box.grid_im < 2)
        throw MalformedInput("invalid stability search box");

    const double d_re = (box.re_max - box.re_min) / (box.grid_re - 1);
    const double d_im = (box.im_max - box.im_min) / (box.grid_im - 1);
    auto node = [&](int i, int j)
    { return Complex(box.re_min + i * d_re, box.im_min + j * d_im); };

    std::vector<double> mag(static_cast<std::size_t>(box.grid_re) * box.grid_im);
    auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(i) * box.grid_im + j]; };
    for (int i = 0; i < box.grid_re; ++i)
        for (int j = 0; j < box.grid_im; ++j)
        {
            const Complex lambda = node(i, j);
            const double v = std::abs(char_function(sys, lambda).value) / char_scale(sys, lambda);
            at(i, j) = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        }

    std::vector<Complex> seeds;
    for (int i = 0; i < box.grid_re; ++i)
        for (int j = 0; j < box.grid_im; ++j)
        {
            bool minimum = std::isfinite(at(i, j));
            for (int di = -1; di <= 1 && minimum; ++di)
                for (int dj = -1; dj <= 1 && minimum; ++dj)
                {
                    const int ii = i + di, jj = j + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= box.grid_re ||
                        jj >= box.grid_im)
                        continue;
                    if (at(ii, jj) < at(i, j))
                        minimum = false;
                }
            if (minimum)
                seeds.push_back(node(i, j));
        }

    std::vector<RootEstimate> roots;
    for (Complex lambda : seeds)
    {
        for (int it = 0; it < newton_max_iterations; ++it)
        {
            const CharValue h = char_function(sys, lambda);
            if (h.value == Complex(0.0))
                break;
            if (h.derivative == Complex(0.0) || !std::isfinite(std::abs(h.derivative)))
                break;
            const Complex step = h.value / h.derivative;
            lambda -= step;
            if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
                break;
            if (std::abs(step) <= 1e-14 * (1.0 + std::abs(lambda)))
                break;
        }
        if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
            continue;
        if constexpr (!is_complex_v<Scalar>)
            if (lambda.imag() < 0.0)
                lambda = std::conj(lambda);
        const double residual = std::abs(char_function(sys, lambda).value);
        const double scale = char_scale(sys, lambda);
        if (!(residual <= root_residual_tol * scale))
            continue;
        if (lambda.real() < box.re_min - d_re || lambda.real() > box.re_max + d_re ||
            lambda.imag() < box.im_min - d_im || lambda.imag() > box.im_max + d_im)
            continue;
        if constexpr (!is_complex_v<Scalar>)
            if (std::abs(lambda.imag()) <= 1e-12 * (1.0 + std::abs(lambda)))
                lambda = Complex(lambda.real(), 0.0);
        roots.push_back({lambda, residual, scale});
    }

    std::sort(roots.begin(), roots.end(), [](const RootEstimate& a, const RootEstimate& b)
              {
                  if (a.lambda.real() != b.lambda.real())
                      return a.lambda.real() > b.lambda.real();
                  return a.lambda.imag() < b.lambda.imag();
              });
    std::vector<RootEstimate> unique;
    for (const auto& r : roots)
    {
        const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const RootEstimate& u)
                                           { return std::abs(u.lambda - r.lambda) <=
                                                    dedup_radius * (1.0 + std::abs(r.lambda)); });
        if (!duplicate)
            unique.push_back(r);
    }

    StabilityReport report;
    report.box = box;
    report.rightmost_roots = std::move(unique);
    if (report.rightmost_roots.empty())
    {
        report.no_roots_found = true;
        report.box_limited = true;
        return report;
    }
    const Complex lead = report.rightmost_roots.front().lambda;
    report.alpha = lead.real();

    auto near_right = [&](Complex z) { return z.real() >= box.re_max - 2.0 * d_re; };
    auto near_other = [&](Complex z)
    {
        return z.real() <= box.re_min + 2.0 * d_re || z.imag() >= box.im_max - 2.0 * d_im ||
               (is_complex_v<Scalar> && z.imag() <= box.im_min + 2.0 * d_im);
    };
    for (const auto& r : report.rightmost_roots)
        if (near_right(r.lambda))
            report.box_limited = true;
    // Every root attaining alpha counts as rightmost.
    for (const auto& r : report.rightmost_roots)
        if (r.lambda.real() >= *report.alpha - dedup_radius * (1.0 + std::abs(r.lambda)) &&
            near_other(r.lambda))
            report.box_limited = true;
    return report;
}

template <typename Scalar>
StabilityVerdict assess_exponential_stability(const DdaeSystem<Scalar>& sys,
                                              const SplitCoefficients<Scalar>& split,
                                              StabilityReport& report, double margin)
{
    const auto cls = classify_propagation(split, sys.horizon_intervals());
    if (cls.kind == PropagationKind::DeSmoothing)
    {
        report.gate = StabilityGate::NotApplicableDeSmoothing;
        return StabilityVerdict::InconclusiveDeSmoothing;
    }
    report.gate = StabilityGate::Applicable;
    if (report.box_limited || !report.alpha)
        return StabilityVerdict::InconclusiveBox;
    if (*report.alpha < -margin)
        return StabilityVerdict::Stable;
    if (*report.alpha > margin)
        return StabilityVerdict::Unstable;
    return StabilityVerdict::Marginal;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template CharValue char_function<S>(const Matrix<S>&, const Matrix<S>&,   \
                                        const Matrix<S>&, double, Complex);   \
    template CharValue char_function<S>(const DdaeSystem<S>&, Complex);       \
    template double char_scale<S>(const DdaeSystem<S>&, Complex);             \
    template SearchBox default_search_box<S>(const DdaeSystem<S>&);           \
    template StabilityReport spectral_abscissa<S>(                            \
        const DdaeSystem<S>&, const std::optional<SearchBox>&);               \
    template StabilityVerdict assess_exponential_stability<S>(                \
        const DdaeSystem<S>&, const SplitCoefficients<S>&, StabilityReport&,  \
        double);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
