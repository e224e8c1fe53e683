#ifndef DDAE_IO_HPP
#define DDAE_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "ddae/classification.hpp"
#include "ddae/history.hpp"
#include "ddae/reformulation.hpp"
#include "ddae/solver.hpp"
#include "ddae/stability.hpp"

namespace ddae
{

using Json = nlohmann::json;

inline constexpr const char* schema_tag = "ddae-kit/1";

using AnySystem = std::variant<DdaeSystem<double>, DdaeSystem<Complex>>;

/// Problem file layout:
///   { "dimension": n, "field": "real" | "complex", "E", "A", "D": n x n
///     row-major, "tau", "horizon_intervals",
///     "history" / "inhomogeneity": [ { "start", "end", "coeffs" } ] }
/// Complex entries are [re, im]. Throws MalformedInput or
/// DimensionMismatch.
AnySystem parse_problem(const Json& doc);
AnySystem load_problem(const std::string& path);

template <typename Scalar>
Json problem_to_json(const DdaeSystem<Scalar>& sys);

/// Canonical text: two-space indentation, sorted keys, trailing newline.
std::string canonical_dump(const Json& doc);

template <typename Scalar>
Json analyze_report(const DdaeSystem<Scalar>& sys);

template <typename Scalar>
Json ledger_json(const SolveResult<Scalar>& result);

/// Rows at mapped Lobatto nodes of every piece, history included. Piece
/// ends carry side L, piece starts side R.
template <typename Scalar>
std::string trajectory_csv(const Trajectory<Scalar>& trajectory, int nodes);

template <typename Scalar>
Json hidden_delay_json(const HiddenDelayExpansion<Scalar>& expansion);

Json stability_json(const StabilityReport& report, StabilityVerdict verdict);

template <typename Scalar>
Json splicing_json(const SplicingReport& report, const Index3Check& index3);

} // namespace ddae

#endif
