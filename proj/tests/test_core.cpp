#include "support.hpp"

#include <dynabt/instances.hpp>
#include <dynabt/problem_io.hpp>

#include <doctest.h>

#include <random>

using namespace dynabt;
using namespace dynabt::test;

namespace {

bool mentions(const std::vector<std::string> &found, const std::string &needle)
{
    for (const auto &s : found)
        if (s.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("validate_problem")
{
    CHECK(validate_problem(figure1_instance()).empty());
    CHECK(figure1_instance().well_formed());

    const std::vector<std::string> ab{"a", "b"};
    const Problem dup({{"A", ab}}, {{{"A", "A"}, RelationKind::allowed, {{"a", "b"}}}});
    const auto v1 = validate_problem(dup);
    REQUIRE(v1.size() == 1);
    CHECK(mentions(v1, "duplicate scope variable"));
    CHECK_FALSE(dup.well_formed());
    CHECK_THROWS_AS(dup.require_well_formed(), InputError);

    const Problem out_of_domain({{"A", ab}, {"B", ab}}, {{{"A", "B"}, RelationKind::allowed, {{"a", "z"}}}});
    const auto v2 = validate_problem(out_of_domain);
    REQUIRE(v2.size() == 1);
    CHECK(mentions(v2, "tuple out of domain"));

    const Problem unknown({{"A", ab}}, {{{"A", "Q"}, RelationKind::neq, {}}});
    CHECK(mentions(validate_problem(unknown), "unknown scope variable"));

    const Problem empty_domain({{"A", {}}}, {});
    CHECK(mentions(validate_problem(empty_domain), "empty domain"));
}

TEST_CASE("is_solution")
{
    const auto p = figure1_instance();
    CHECK(is_solution(p, assignment(p, {{"A", "red"}, {"B", "red"}, {"C", "blue"}, {"D", "yellow"}, {"E", "blue"}})));
    for (const char *e : {"red", "yellow", "blue"})
        CHECK_FALSE(
            is_solution(p, assignment(p, {{"A", "red"}, {"B", "yellow"}, {"C", "blue"}, {"D", "blue"}, {"E", e}})));

    const Problem free({{"x", {"0", "1"}}, {"y", {"0", "1", "2"}}}, {});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(is_solution(free, {a, b}));

    CHECK_THROWS_AS(is_solution(p, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(is_solution(p, {0, 0, 0, 0, 7}), std::invalid_argument);
}

TEST_CASE("completed_constraints")
{
    const auto p = figure1_instance();
    // Borders in declaration order: A-C, A-D, A-E, B-D, B-E, D-E.
    CHECK(completed_constraints(p, vars(p, {"A", "B"}), var(p, "C")) == std::vector<std::size_t>{0});
    CHECK(completed_constraints(p, {}, var(p, "C")).empty());
    CHECK(completed_constraints(p, vars(p, {"A", "B", "C", "D"}), var(p, "E")) == std::vector<std::size_t>{2, 4, 5});

    SUBCASE("monotone in the assigned set")
    {
        const auto small = completed_constraints(p, vars(p, {"A"}), var(p, "E"));
        const auto large = completed_constraints(p, vars(p, {"A", "D"}), var(p, "E"));
        CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    }
}

TEST_CASE("violates")
{
    const auto p = figure1_instance();
    const auto a_red = partial(p, {{"A", "red"}});
    CHECK(violates(p, a_red, {var(p, "C"), val(p, "C", "red")}) == std::optional<std::size_t>{0});
    CHECK_FALSE(violates(p, a_red, {var(p, "B"), val(p, "B", "yellow")}));
    CHECK_FALSE(violates(p, PartialSolution(p.num_variables()), {var(p, "E"), 0}));
}

TEST_CASE("neq shorthand and its expansion agree")
{
    for (int d = 1; d <= 4; ++d) {
        std::vector<std::string> dom;
        for (int k = 0; k < d; ++k)
            dom.push_back(std::to_string(k));
        const Problem shorthand({{"x", dom}, {"y", dom}}, {{{"x", "y"}, RelationKind::neq, {}}});
        const Problem expanded({{"x", dom}, {"y", dom}}, {expand(shorthand, shorthand.constraints()[0])});
        CHECK(expanded.constraints()[0].kind == RelationKind::allowed);
        CHECK(expanded.constraints()[0].allowed.size() == static_cast<std::size_t>(d * (d - 1)));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                CHECK(is_solution(shorthand, {a, b}) == is_solution(expanded, {a, b}));
                PartialSolution px(2);
                px.bind(0, a);
                CHECK(violates(shorthand, px, {1, b}).has_value() == violates(expanded, px, {1, b}).has_value());
            }
    }
}

TEST_CASE("duplicate scopes are a conjunction")
{
    const std::vector<std::string> abc{"a", "b", "c"};
    const Problem p({{"x", abc}, {"y", abc}},
                    {{{"x", "y"}, RelationKind::allowed, {{"a", "a"}, {"b", "b"}}},
                     {{"x", "y"}, RelationKind::allowed, {{"b", "b"}, {"c", "c"}}}});
    CHECK(p.well_formed());
    CHECK(is_solution(p, {1, 1}));
    CHECK_FALSE(is_solution(p, {0, 0}));
    CHECK_FALSE(is_solution(p, {2, 2}));
}

TEST_CASE("PartialSolution keeps order through unbind and truncate")
{
    PartialSolution ps(4);
    ps.bind(2, 1);
    ps.bind(0, 0);
    ps.bind(3, 2);
    CHECK(ps.position_of(0) == 1);
    CHECK_THROWS_AS(ps.bind(0, 1), std::logic_error);

    CHECK(ps.unbind(0) == Binding{0, 0});
    REQUIRE(ps.size() == 2);
    CHECK(ps.bindings()[0] == Binding{2, 1});
    CHECK(ps.bindings()[1] == Binding{3, 2});
    CHECK(ps.position_of(3) == 1);
    CHECK(ps.position_of(0) == npos);
    CHECK(ps.assigned() == VarSet{2, 3});

    ps.bind(1, 0);
    const auto removed = ps.truncate(1);
    CHECK(removed == std::vector<Binding>{{3, 2}, {1, 0}});
    CHECK(ps.size() == 1);
    CHECK_FALSE(ps.is_bound(3));
}

TEST_CASE("VarSet")
{
    VarSet s{3, 1, 3, 2};
    CHECK(s.items() == std::vector<VarIndex>{1, 2, 3});
    CHECK(VarSet{1, 3}.subset_of(s));
    CHECK_FALSE(VarSet{0}.subset_of(s));
    s.merge({0, 5});
    CHECK(s.items() == std::vector<VarIndex>{0, 1, 2, 3, 5});
    CHECK(s.erase(2));
    CHECK_FALSE(s.erase(2));
}

TEST_CASE("problem JSON")
{
    const auto fig = figure1_instance();
    const auto text = to_json(fig);
    CHECK(parse_problem(text) == fig);
    CHECK(to_json(parse_problem(text)) == text);

    SUBCASE("bundled files")
    {
        CHECK(load_problem(DYNABT_DATA_DIR "/xyz.json") == xyz_unsat_instance());
        CHECK(load_problem(DYNABT_DATA_DIR "/figure1.json") == fig);
    }

    SUBCASE("unknown field is named")
    {
        const std::string bad = R"({"variables": [], "constraints": [], "weights": [1]})";
        try {
            parse_problem(bad);
            FAIL("accepted an unknown field");
        }
        catch (const InputError &e) {
            CHECK(std::string(e.what()).find("weights") != std::string::npos);
        }
    }

    SUBCASE("syntax errors carry a position")
    {
        try {
            parse_problem("{\n  \"variables\": [,]\n}");
            FAIL("accepted malformed JSON");
        }
        catch (const InputError &e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    CHECK_THROWS_AS(parse_problem(R"({"variables": []})"), InputError);
    CHECK_THROWS_AS(parse_problem(R"({"variables": [{"name": 3, "domain": []}], "constraints": []})"), InputError);
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), InputError);
}

TEST_CASE("is_solution agrees with a direct check on random problems")
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_binary_csp(5, 3, 0.5, 0.3, 500 + k);
        Assignment a(5);
        for (auto &x : a)
            x = static_cast<ValueIndex>(rng() % 3);
        bool ok = true;
        for (const auto &c : p.constraints()) {
            const auto full = expand(p, c);
            std::vector<std::string> tuple;
            for (const auto &n : full.scope)
                tuple.push_back(p.value_name(var(p, n), a[var(p, n)]));
            ok = ok && std::find(full.allowed.begin(), full.allowed.end(), tuple) != full.allowed.end();
        }
        CHECK(is_solution(p, a) == ok);
    }
}
