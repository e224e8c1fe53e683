// ddae-kit: command-line front end for the DDAE toolkit.
//
// Exit codes: 0 ok, 2 inconsistent restart or inadmissible history,
// 3 singular pencil or failed decomposition, 4 malformed input or any other
// failure. Results go to stdout (or -o), diagnostics to stderr.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ddae/errors.hpp"
#include "ddae/io.hpp"

namespace
{

using namespace ddae;

constexpr int exit_inconsistent = 2;
constexpr int exit_singular = 3;
constexpr int exit_malformed = 4;

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw MalformedInput("cannot write " + path);
    out << text;
}

void emit(const std::string& path, const Json& doc)
{
    write_text(path, canonical_dump(doc));
}

struct SolveOptions
{
    std::string csv;
    std::string ledger;
    int degree = 48;
    std::optional<int> k_max;
    std::string on_inconsistent = "record";
    int nodes = 16;
};

struct BoxOptions
{
    std::optional<double> re_min, re_max, im_max;
    std::optional<int> grid;
};

struct ProbeCli
{
    int order = 1;
    std::string side = "slow";
    std::vector<double> target;
    std::optional<std::uint64_t> seed;
};

template <typename Scalar>
int run_solve(const DdaeSystem<Scalar>& sys, const SolveOptions& opt, const std::string& out)
{
    SolverConfig config;
    config.degree = opt.degree;
    config.k_max = opt.k_max;
    config.on_inconsistent =
        opt.on_inconsistent == "stop" ? OnInconsistent::Stop : OnInconsistent::Record;
    const auto result = method_of_steps(sys, build_split(sys), config);

    if (!opt.csv.empty())
        write_text(opt.csv, trajectory_csv(result.trajectory, opt.nodes));
    const Json ledger = ledger_json(result);
    if (!opt.ledger.empty())
        emit(opt.ledger, ledger);

    Json summary{{"schema", schema_tag},
                 {"command", "solve"},
                 {"completed", result.completed},
                 {"segments", result.trajectory.segments.size()},
                 {"ledger", ledger}};
    emit(out, summary);
    if (!result.completed)
    {
        std::cerr << "inconsistent restart at segment " << *result.breakdown_segment
                  << " (residual " << result.breakdown_residual << ")\n";
        return exit_inconsistent;
    }
    return 0;
}

template <typename Scalar>
int run_stability(const DdaeSystem<Scalar>& sys, const BoxOptions& opt, const std::string& out)
{
    SearchBox box = default_search_box(sys);
    if (opt.re_min)
        box.re_min = *opt.re_min;
    if (opt.re_max)
        box.re_max = *opt.re_max;
    if (opt.im_max)
    {
        box.im_max = *opt.im_max;
        if (is_complex_v<Scalar>)
            box.im_min = -*opt.im_max;
    }
    if (opt.grid)
        box.grid_re = box.grid_im = *opt.grid;
    auto report = spectral_abscissa(sys, box);
    const auto verdict = assess_exponential_stability(sys, build_split(sys), report);
    emit(out, stability_json(report, verdict));
    return 0;
}

template <typename Scalar>
int run_hidden_delays(const DdaeSystem<Scalar>& sys, const std::string& out)
{
    const auto expansion = expand_hidden_delays(build_split(sys), sys.horizon_intervals());
    Json doc = hidden_delay_json(expansion);
    doc["schema"] = schema_tag;
    doc["command"] = "hidden-delays";
    emit(out, doc);
    return 0;
}

template <typename Scalar>
int run_check_history(const DdaeSystem<Scalar>& sys, const std::string& out)
{
    const auto split = build_split(sys);
    Json doc = splicing_json<Scalar>(splicing_report(sys, split), check_index3_uniqueness(split));
    doc["schema"] = schema_tag;
    doc["command"] = "check-history";
    emit(out, doc);
    return 0;
}

template <typename Scalar>
int run_probe(const DdaeSystem<Scalar>& sys, const ProbeCli& opt, const std::string& out)
{
    const auto split = build_split(sys);
    const ProbeSide side = opt.side == "fast" ? ProbeSide::Fast : ProbeSide::Slow;
    const Index dim = side == ProbeSide::Slow ? split.n_d() : split.n_a();
    const std::size_t per_entry = is_complex_v<Scalar> ? 2 : 1;
    if (opt.target.size() != static_cast<std::size_t>(dim) * per_entry)
        throw DimensionMismatch("target needs " + std::to_string(dim * per_entry) + " numbers");
    Vector<Scalar> target(dim);
    for (Index i = 0; i < dim; ++i)
    {
        if constexpr (is_complex_v<Scalar>)
            target(i) = Scalar(opt.target[2 * i], opt.target[2 * i + 1]);
        else
            target(i) = opt.target[i];
    }
    ProbeOptions options;
    options.seed = opt.seed;
    const auto phi = construct_probe_history(split, opt.order, target, side, options);
    emit(out, problem_to_json(sys.with_history(phi)));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Analysis and method-of-steps solver for linear delay DAEs"};
    app.require_subcommand(1);

    std::string path;
    std::string out;
    auto add_common = [&](CLI::App* sub)
    {
        sub->add_option("problem", path, "Problem file (JSON)")->required();
        sub->add_option("-o,--output", out, "Write the JSON result here instead of stdout");
    };

    auto* analyze = app.add_subcommand("analyze", "Pencil, classification and history report");
    add_common(analyze);

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "Method of steps with derivative-jump ledger");
    add_common(solve);
    solve->add_option("--csv", solve_opt.csv, "Trajectory CSV output");
    solve->add_option("--ledger", solve_opt.ledger, "Jump ledger JSON output");
    solve->add_option("--degree", solve_opt.degree, "Chebyshev degree per piece")
        ->check(CLI::Range(2, 256));
    solve->add_option("--kmax", solve_opt.k_max, "Highest derivative order compared at knots")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--on-inconsistent", solve_opt.on_inconsistent, "stop | record")
        ->check(CLI::IsMember({"stop", "record"}));
    solve->add_option("--nodes", solve_opt.nodes, "CSV nodes per piece")->check(CLI::Range(1, 512));

    BoxOptions box_opt;
    auto* stability = app.add_subcommand("stability", "Spectral abscissa and stability verdict");
    add_common(stability);
    stability->add_option("--re-min", box_opt.re_min);
    stability->add_option("--re-max", box_opt.re_max);
    stability->add_option("--im-max", box_opt.im_max);
    stability->add_option("--grid", box_opt.grid)->check(CLI::Range(2, 2000));

    auto* hidden = app.add_subcommand("hidden-delays", "Retarded multi-delay form");
    add_common(hidden);

    auto* check = app.add_subcommand("check-history", "Admissibility and splicing conditions");
    add_common(check);

    ProbeCli probe_opt;
    auto* probe = app.add_subcommand("probe", "Construct a history with a prescribed mismatch");
    add_common(probe);
    probe->add_option("--order", probe_opt.order, "Derivative order of the mismatch")
        ->check(CLI::Range(1, probe_order_limit));
    probe->add_option("--side", probe_opt.side, "slow | fast")
        ->check(CLI::IsMember({"slow", "fast"}));
    probe->add_option("--target", probe_opt.target,
                      "Mismatch vector (re, im pairs for complex data)")
        ->delimiter(',')
        ->required();
    probe->add_option("--seed", probe_opt.seed, "Randomize the free Hermite values");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_malformed;
    }

    try
    {
        const AnySystem any = load_problem(path);
        return std::visit(
            [&](const auto& sys) -> int
            {
                if (analyze->parsed())
                {
                    emit(out, analyze_report(sys));
                    return 0;
                }
                if (solve->parsed())
                    return run_solve(sys, solve_opt, out);
                if (stability->parsed())
                    return run_stability(sys, box_opt, out);
                if (hidden->parsed())
                    return run_hidden_delays(sys, out);
                if (check->parsed())
                    return run_check_history(sys, out);
                return run_probe(sys, probe_opt, out);
            },
            any);
    }
    catch (const InconsistentRestart& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_inconsistent;
    }
    catch (const NotAdmissible& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_inconsistent;
    }
    catch (const SingularPencil& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_singular;
    }
    catch (const DecompositionFailure& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_singular;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    }
}
