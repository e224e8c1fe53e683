#ifndef DDAE_STABILITY_HPP
#define DDAE_STABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "ddae/model.hpp"

namespace ddae
{

/// h(lambda) = det(lambda E - A - exp(-lambda tau) D) and its derivative.
struct CharValue
{
    Complex value;
    Complex derivative;
};

template <typename Scalar>
CharValue char_function(const Matrix<Scalar>& E, const Matrix<Scalar>& A,
                        const Matrix<Scalar>& D, double tau, Complex lambda);

template <typename Scalar>
CharValue char_function(const DdaeSystem<Scalar>& sys, Complex lambda);

/// Residual scale (1 + |lambda| |E| + |A| + |exp(-lambda tau)| |D|)^n.
template <typename Scalar>
double char_scale(const DdaeSystem<Scalar>& sys, Complex lambda);

struct SearchBox
{
    double re_min = 0.0;
    double re_max = 0.0;
    /// Zero for real data (conjugate symmetry), -im_max for complex data.
    double im_min = 0.0;
    double im_max = 0.0;
    int grid_re = 80;
    int grid_im = 80;
};

/// Re in [-10, 5] (1 + |A| + |D|) / (1 + |E|), Im up to 20 pi / tau.
template <typename Scalar>
SearchBox default_search_box(const DdaeSystem<Scalar>& sys);

struct RootEstimate
{
    Complex lambda;
    /// |h(lambda)|.
    double residual = 0.0;
    double scale = 1.0;
};

enum class StabilityGate
{
    Applicable,
    NotApplicableDeSmoothing
};

enum class StabilityVerdict
{
    Stable,
    Unstable,
    Marginal,
    InconclusiveDeSmoothing,
    InconclusiveBox
};

std::string to_string(StabilityGate gate);
std::string to_string(StabilityVerdict verdict);

struct StabilityReport
{
    /// Max real part over the roots found; empty when none were found.
    std::optional<double> alpha;
    /// Sorted by decreasing real part, then increasing imaginary part.
    std::vector<RootEstimate> rightmost_roots;
    StabilityGate gate = StabilityGate::Applicable;
    SearchBox box;
    /// The rightmost root, or any root, lies within two cells of the
    /// right edge; or the rightmost root touches another edge.
    bool box_limited = false;
    bool no_roots_found = false;
};

template <typename Scalar>
StabilityReport spectral_abscissa(const DdaeSystem<Scalar>& sys,
                                  const std::optional<SearchBox>& box = {});

/// Sets report.gate from the propagation class and returns the verdict.
template <typename Scalar>
StabilityVerdict assess_exponential_stability(const DdaeSystem<Scalar>& sys,
                                              const SplitCoefficients<Scalar>& split,
                                              StabilityReport& report,
                                              double margin = 1e-6);

} // namespace ddae

#endif
