#include "ddae/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddae/errors.hpp"

namespace ddae
{

namespace
{

const std::vector<std::string> problem_keys{
    "dimension", "field", "E", "A", "D", "tau", "horizon_intervals", "history", "inhomogeneity"};

const Json& require(const Json& doc, const std::string& key)
{
    if (!doc.contains(key))
        throw MalformedInput("missing field '" + key + "'");
    return doc.at(key);
}

template <typename Scalar>
Scalar parse_scalar(const Json& v, const std::string& where)
{
    if constexpr (is_complex_v<Scalar>)
    {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw MalformedInput(where + ": complex entries must be [re, im]");
        return Scalar(v[0].get<double>(), v[1].get<double>());
    }
    else
    {
        if (!v.is_number())
            throw MalformedInput(where + ": expected a number");
        return v.get<double>();
    }
}

template <typename Scalar>
Json scalar_json(Scalar v)
{
    if constexpr (is_complex_v<Scalar>)
        return Json::array({v.real(), v.imag()});
    else
        return v;
}

template <typename Scalar>
Matrix<Scalar> parse_matrix(const Json& v, Index n, const std::string& name)
{
    if (!v.is_array() || static_cast<Index>(v.size()) != n)
        throw DimensionMismatch(name + " must have " + std::to_string(n) + " rows");
    Matrix<Scalar> m(n, n);
    for (Index i = 0; i < n; ++i)
    {
        const Json& row = v[i];
        if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw DimensionMismatch(name + " must have " + std::to_string(n) + " columns");
        for (Index j = 0; j < n; ++j)
            m(i, j) = parse_scalar<Scalar>(row[j], name);
    }
    return m;
}

template <typename Scalar>
Json matrix_json(const Matrix<Scalar>& m)
{
    Json out = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
    {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(scalar_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

template <typename Scalar>
Json vector_json(const Vector<Scalar>& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(scalar_json(v(i)));
    return out;
}

template <typename Scalar>
PiecewisePolynomial<Scalar> parse_pieces(const Json& v, Index n, const std::string& name)
{
    if (!v.is_array() || v.empty())
        throw MalformedInput(name + " must be a non-empty list of pieces");
    std::vector<typename PiecewisePolynomial<Scalar>::Piece> pieces;
    for (const Json& p : v)
    {
        if (!p.is_object())
            throw MalformedInput(name + ": piece must be an object");
        for (const auto& [key, _] : p.items())
            if (key != "start" && key != "end" && key != "coeffs")
                throw MalformedInput(name + ": unknown piece field '" + key + "'");
        typename PiecewisePolynomial<Scalar>::Piece piece;
        const Json& start = require(p, "start");
        const Json& end = require(p, "end");
        if (!start.is_number() || !end.is_number())
            throw MalformedInput(name + ": piece bounds must be numbers");
        piece.start = start.get<double>();
        piece.end = end.get<double>();
        const Json& coeffs = require(p, "coeffs");
        if (!coeffs.is_array() || coeffs.empty())
            throw MalformedInput(name + ": coeffs must be a non-empty list");
        for (const Json& c : coeffs)
        {
            if (!c.is_array() || static_cast<Index>(c.size()) != n)
                throw DimensionMismatch(name + ": coefficient vectors must have length " +
                                        std::to_string(n));
            Vector<Scalar> vec(n);
            for (Index i = 0; i < n; ++i)
                vec(i) = parse_scalar<Scalar>(c[i], name);
            piece.coeffs.push_back(vec);
        }
        pieces.push_back(std::move(piece));
    }
    return PiecewisePolynomial<Scalar>(std::move(pieces), n);
}

template <typename Scalar>
Json pieces_json(const PiecewisePolynomial<Scalar>& pp)
{
    Json out = Json::array();
    for (const auto& piece : pp.pieces())
    {
        Json coeffs = Json::array();
        for (const auto& c : piece.coeffs)
            coeffs.push_back(vector_json(c));
        out.push_back({{"start", piece.start}, {"end", piece.end}, {"coeffs", coeffs}});
    }
    return out;
}

template <typename Scalar>
DdaeSystem<Scalar> parse_typed(const Json& doc, Index n)
{
    const Json& tau = require(doc, "tau");
    const Json& M = require(doc, "horizon_intervals");
    if (!tau.is_number())
        throw MalformedInput("tau must be a number");
    if (!M.is_number_integer())
        throw MalformedInput("horizon_intervals must be an integer");
    return DdaeSystem<Scalar>(parse_matrix<Scalar>(require(doc, "E"), n, "E"),
                              parse_matrix<Scalar>(require(doc, "A"), n, "A"),
                              parse_matrix<Scalar>(require(doc, "D"), n, "D"),
                              tau.get<double>(), M.get<int>(),
                              parse_pieces<Scalar>(require(doc, "inhomogeneity"), n,
                                                   "inhomogeneity"),
                              parse_pieces<Scalar>(require(doc, "history"), n, "history"));
}

Json check_json(const ConditionCheck& c)
{
    return {{"satisfied", c.satisfied}, {"residual", c.residual}, {"threshold", c.threshold}};
}

Json optional_int(const std::optional<int>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json classification_json(const ClassificationReport& r)
{
    return {{"propagation", to_string(r.propagation.kind)},
            {"nu_D", optional_int(r.propagation.nu_D)},
            {"first_violating_k", optional_int(r.propagation.first_violating_k)},
            {"horizon_dependent", r.propagation.horizon_dependent_note},
            {"legacy", to_string(r.legacy.kind)},
            {"cross_check", r.consistency_flag},
            {"evidence",
             {{"n_power_b_a", r.evidence.n_power_b_a},
              {"b_a2_power", r.evidence.b_a2_power},
              {"coupling_threshold", r.evidence.coupling_threshold},
              {"n_norm", r.evidence.n_norm}}}};
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

AnySystem parse_problem(const Json& doc)
{
    if (!doc.is_object())
        throw MalformedInput("problem file must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (std::find(problem_keys.begin(), problem_keys.end(), key) == problem_keys.end())
            throw MalformedInput("unknown field '" + key + "'");
    const Json& dim = require(doc, "dimension");
    if (!dim.is_number_integer() || dim.get<long long>() < 1)
        throw MalformedInput("dimension must be a positive integer");
    const Index n = dim.get<Index>();
    std::string field = "real";
    if (doc.contains("field"))
    {
        if (!doc["field"].is_string())
            throw MalformedInput("field must be \"real\" or \"complex\"");
        field = doc["field"].get<std::string>();
    }
    if (field == "real")
        return parse_typed<double>(doc, n);
    if (field == "complex")
        return parse_typed<Complex>(doc, n);
    throw MalformedInput("field must be \"real\" or \"complex\"");
}

AnySystem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MalformedInput("cannot open " + path);
    Json doc;
    try
    {
        doc = Json::parse(in);
    }
    catch (const Json::exception& e)
    {
        throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

template <typename Scalar>
Json problem_to_json(const DdaeSystem<Scalar>& sys)
{
    return {{"dimension", sys.n()},
            {"field", is_complex_v<Scalar> ? "complex" : "real"},
            {"E", matrix_json(sys.E())},
            {"A", matrix_json(sys.A())},
            {"D", matrix_json(sys.D())},
            {"tau", sys.tau()},
            {"horizon_intervals", sys.horizon_intervals()},
            {"history", pieces_json(sys.phi())},
            {"inhomogeneity", pieces_json(sys.f())}};
}

std::string canonical_dump(const Json& doc)
{
    return doc.dump(2) + "\n";
}

template <typename Scalar>
Json analyze_report(const DdaeSystem<Scalar>& sys)
{
    const auto split = build_split(sys);
    const auto& qwf = split.qwf;
    const auto cls = classify(split, sys.horizon_intervals());
    const auto backward = build_backward_system(sys);
    const auto index3 = check_index3_uniqueness(split);
    const auto splicing = splicing_report(sys, split);

    Json report{{"schema", schema_tag}, {"command", "analyze"}};
    report["regularity"] = {{"regular", sys.regularity().regular},
                            {"witness", sys.regularity().witness},
                            {"determinant_magnitude", sys.regularity().determinant_magnitude}};
    report["qwf"] = {{"n_d", qwf.n_d},
                     {"n_a", qwf.n_a},
                     {"nu", qwf.nu},
                     {"rank_ambiguous", qwf.rank_ambiguous},
                     {"reconstruction_residual", qwf.reconstruction_residual}};
    report["classification"] = classification_json(cls);

    Json back{{"regular", backward.regularity.regular}};
    if (backward.classification)
    {
        back["propagation"] = to_string(backward.classification->propagation.kind);
        back["legacy"] = to_string(backward.classification->legacy.kind);
    }
    report["backward"] = back;

    if (cls.propagation.kind == PropagationKind::Smoothing)
        report["hidden_delays"] = hidden_delay_json(expand_hidden_delays(split, sys.horizon_intervals()));
    else
        report["hidden_delays"] = nullptr;
    report["history"] = splicing_json<Scalar>(splicing, index3);
    return report;
}

template <typename Scalar>
Json ledger_json(const SolveResult<Scalar>& result)
{
    Json entries = Json::array();
    for (const auto& e : result.ledger.entries)
        entries.push_back({{"knot", e.knot},
                           {"t", e.t},
                           {"matched_order", e.matched_order},
                           {"first_jump_order", optional_int(e.first_jump_order)},
                           {"jump_norm", e.jump_norm},
                           {"jump_vector", vector_json(e.jump_vector)},
                           {"inconsistent", e.inconsistent_restart}});
    return {{"schema", schema_tag},
            {"k_max", result.ledger.k_max},
            {"completed", result.completed},
            {"breakdown_segment", optional_int(result.breakdown_segment)},
            {"breakdown_residual", result.breakdown_residual},
            {"entries", entries}};
}

template <typename Scalar>
std::string trajectory_csv(const Trajectory<Scalar>& trajectory, int nodes)
{
    std::ostringstream out;
    out << "t";
    for (Index i = 1; i <= trajectory.n; ++i)
    {
        if constexpr (is_complex_v<Scalar>)
            out << ",x" << i << "_re,x" << i << "_im";
        else
            out << ",x" << i;
    }
    out << ",side\n";

    const auto y = cgl_nodes(nodes);
    auto emit = [&](const SegmentSolution<Scalar>& seg)
    {
        const double t0 = (seg.index - 1) * trajectory.tau;
        for (const auto& piece : seg.pieces)
            for (std::size_t j = 0; j < y.size(); ++j)
            {
                const double s = 0.5 * (piece.a + piece.b) + 0.5 * (piece.b - piece.a) * y[j];
                const Vector<Scalar> x = piece.evaluate(s);
                out << format_double(t0 + s);
                for (Index i = 0; i < x.size(); ++i)
                {
                    if constexpr (is_complex_v<Scalar>)
                        out << ',' << format_double(x(i).real()) << ','
                            << format_double(x(i).imag());
                    else
                        out << ',' << format_double(x(i));
                }
                const char* side = j == 0 ? "R" : (j + 1 == y.size() ? "L" : "");
                out << ',' << side << '\n';
            }
    };
    emit(trajectory.history);
    for (const auto& seg : trajectory.segments)
        emit(seg);
    return out.str();
}

template <typename Scalar>
Json hidden_delay_json(const HiddenDelayExpansion<Scalar>& expansion)
{
    Json D = Json::array();
    for (const auto& m : expansion.D)
        D.push_back(matrix_json(m));
    return {{"nu_D", expansion.nu_D},
            {"delays", expansion.delays()},
            {"J", matrix_json(expansion.J)},
            {"D", D},
            {"window", {expansion.nu_D * expansion.tau, expansion.horizon_intervals * expansion.tau}}};
}

Json stability_json(const StabilityReport& report, StabilityVerdict verdict)
{
    Json roots = Json::array();
    for (const auto& r : report.rightmost_roots)
        roots.push_back({{"re", r.lambda.real()},
                         {"im", r.lambda.imag()},
                         {"residual", r.residual},
                         {"scale", r.scale}});
    return {{"schema", schema_tag},
            {"command", "stability"},
            {"alpha", report.alpha ? Json(*report.alpha) : Json(nullptr)},
            {"verdict", to_string(verdict)},
            {"gate", to_string(report.gate)},
            {"box_limited", report.box_limited},
            {"no_roots_found", report.no_roots_found},
            {"search_box",
             {{"re_min", report.box.re_min},
              {"re_max", report.box.re_max},
              {"im_min", report.box.im_min},
              {"im_max", report.box.im_max},
              {"grid", {report.box.grid_re, report.box.grid_im}}}},
            {"rightmost_roots", roots}};
}

template <typename Scalar>
Json splicing_json(const SplicingReport& report, const Index3Check& index3)
{
    Json out{{"admissible", check_json(report.admissible)},
             {"smooth_c1", check_json(report.smooth_c1)},
             {"smooth_c2", check_json(report.smooth_c2)},
             {"kappa_observed", report.kappa_observed}};
    out["index3_uniqueness"] = {{"applicable", index3.applicable},
                                {"index_at_most_3", index3.index_at_most_3},
                                {"n_b_a2_zero", index3.n_b_a2_zero},
                                {"n2_b_a1_b_d2_zero", index3.n2_b_a1_b_d2_zero},
                                {"n_b_a2_norm", index3.n_b_a2_norm},
                                {"n2_b_a1_b_d2_norm", index3.n2_b_a1_b_d2_norm}};
    return out;
}

#define DDAE_INSTANTIATE(S)                                                   \
    template Json problem_to_json<S>(const DdaeSystem<S>&);                   \
    template Json analyze_report<S>(const DdaeSystem<S>&);                    \
    template Json ledger_json<S>(const SolveResult<S>&);                      \
    template std::string trajectory_csv<S>(const Trajectory<S>&, int);        \
    template Json hidden_delay_json<S>(const HiddenDelayExpansion<S>&);       \
    template Json splicing_json<S>(const SplicingReport&, const Index3Check&);

DDAE_INSTANTIATE(double)
DDAE_INSTANTIATE(Complex)

#undef DDAE_INSTANTIATE

} // namespace ddae
