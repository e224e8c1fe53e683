#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ddae/errors.hpp"
#include "ddae/io.hpp"
#include "support.hpp"

using namespace ddae;
using namespace ddae::test;

namespace
{

std::string data_file(const std::string& name)
{
    return std::string(DDAE_TEST_DATA) + "/" + name;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json minimal()
{
    return Json::parse(R"({
        "dimension": 1, "field": "real", "E": [[1.0]], "A": [[-2.0]], "D": [[1.0]],
        "tau": 1.0, "horizon_intervals": 2,
        "history": [{"start": -1.0, "end": 0.0, "coeffs": [[1.0]]}],
        "inhomogeneity": [{"start": 0.0, "end": 2.0, "coeffs": [[0.0]]}]
    })");
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("canonical problem files round-trip bit-identically")
{
    for (const char* name : {"algebraic_scalar.json", "index_two.json", "smoothing_pair.json",
                             "nilpotent_pair.json", "scalar_retarded.json"})
    {
        CAPTURE(name);
        const std::string text = slurp(data_file(name));
        const AnySystem sys = load_problem(data_file(name));
        const std::string again =
            std::visit([](const auto& s) { return canonical_dump(problem_to_json(s)); }, sys);
        CHECK(again == text);
    }
}

TEST_CASE("parsed data matches the in-code examples")
{
    const auto any = load_problem(data_file("index_two.json"));
    REQUIRE(std::holds_alternative<DdaeSystem<double>>(any));
    const auto& sys = std::get<DdaeSystem<double>>(any);
    const auto ref = index_two();
    CHECK(sys.E() == ref.E());
    CHECK(sys.A() == ref.A());
    CHECK(sys.D() == ref.D());
    for (double t : {-1.0, -0.5, -0.1})
        CHECK((sys.phi().evaluate(t) - ref.phi().evaluate(t)).norm() <= 1e-15);
}

TEST_CASE("malformed problems are rejected")
{
    CHECK_NOTHROW(parse_problem(minimal()));
    auto with = [](auto edit)
    {
        Json doc = minimal();
        edit(doc);
        return doc;
    };
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["extra"] = 1; })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d.erase("tau"); })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["field"] = "quaternion"; })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["dimension"] = 0; })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["horizon_intervals"] = 1.5; })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["A"] = Json::parse("[[1.0, 2.0]]"); })),
                    DimensionMismatch);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["E"] = Json::parse("[[\"x\"]]"); })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["history"] = Json::array(); })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["history"][0]["color"] = 1; })), MalformedInput);
    CHECK_THROWS_AS(parse_problem(with([](Json& d) { d["tau"] = -1.0; })), std::exception);
    CHECK_THROWS_AS(parse_problem(Json::array()), MalformedInput);
    CHECK_THROWS_AS(load_problem(data_file("does_not_exist.json")), MalformedInput);
}

TEST_CASE("complex problems")
{
    Json doc = minimal();
    doc["field"] = "complex";
    doc["A"] = Json::parse("[[[-2.0, 1.0]]]");
    doc["E"] = Json::parse("[[[1.0, 0.0]]]");
    doc["D"] = Json::parse("[[[0.0, 0.5]]]");
    doc["history"][0]["coeffs"] = Json::parse("[[[1.0, -1.0]]]");
    doc["inhomogeneity"][0]["coeffs"] = Json::parse("[[[0.0, 0.0]]]");
    const auto any = parse_problem(doc);
    REQUIRE(std::holds_alternative<DdaeSystem<Complex>>(any));
    const auto& sys = std::get<DdaeSystem<Complex>>(any);
    CHECK(sys.A()(0, 0) == Complex(-2.0, 1.0));
    CHECK(sys.D()(0, 0) == Complex(0.0, 0.5));
    const std::string once = canonical_dump(problem_to_json(sys));
    const auto reparsed = parse_problem(Json::parse(once));
    CHECK(std::visit([](const auto& s) { return canonical_dump(problem_to_json(s)); }, reparsed) == once);
    CHECK(parse_problem(problem_to_json(sys)).index() == 1);

    doc["A"] = Json::parse("[[-2.0]]");
    CHECK_THROWS_AS(parse_problem(doc), MalformedInput);
}

TEST_CASE("trajectory CSV layout")
{
    const auto sys = algebraic_scalar();
    const auto r = method_of_steps(sys, build_split(sys));
    const auto rows = lines(trajectory_csv(r.trajectory, 8));
    REQUIRE(rows.size() == 1 + 5 * 9);
    CHECK(rows[0] == "t,x1,side");
    CHECK(rows[1].rfind("-1,", 0) == 0);
    CHECK(rows[1].substr(rows[1].size() - 2) == ",R");
    CHECK(rows[9].substr(rows[9].size() - 2) == ",L");
    CHECK(rows[5].back() == ',');
    // x = -t on [0, 1]
    CHECK(rows[10].rfind("0,", 0) == 0);
    CHECK(rows[10].substr(rows[10].size() - 2) == ",R");
    for (int row : {10, 14, 18})
    {
        std::istringstream in(rows[row]);
        double t = 0, x = 0;
        char comma = 0;
        in >> t >> comma >> x;
        CHECK(std::abs(x + t) <= 1e-12);
    }
}

TEST_CASE("ledger JSON")
{
    SolverConfig config;
    const auto sys = index_two();
    const auto r = method_of_steps(sys, build_split(sys), config);
    const Json j = ledger_json(r);
    CHECK(j["completed"] == false);
    CHECK(j["breakdown_segment"] == 4);
    const auto& entries = j["entries"];
    REQUIRE(entries.size() >= 4);
    const auto& last = entries.back();
    CHECK(last["knot"] == 3);
    CHECK(last["t"] == 3.0);
    CHECK(last["inconsistent"] == true);
    CHECK(last["first_jump_order"] == 0);
    CHECK(std::abs(last["jump_vector"][1].get<double>() - 2.0) <= 1e-8);
}

TEST_CASE("analysis report carries the classification")
{
    const Json j = analyze_report(smoothing_pair());
    CHECK(j["schema"] == schema_tag);
    CHECK(j["classification"]["propagation"] == "smoothing");
    CHECK(j["classification"]["nu_D"] == 1);
    CHECK(j["hidden_delays"]["delays"] == Json::parse("[1.0, 2.0]"));
    CHECK(j["qwf"]["n_d"] == 1);
    CHECK(j["qwf"]["nu"] == 1);
    CHECK(analyze_report(algebraic_scalar())["hidden_delays"].is_null());
}
