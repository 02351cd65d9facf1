#include "support.hpp"

#include <dynabt/engine.hpp>
#include <dynabt/instances.hpp>

#include <doctest.h>

#include <functional>
#include <set>
#include <sstream>

using namespace dynabt;
using namespace dynabt::test;

namespace {

const Mechanism basic = make_mechanism(MechanismKind::basic);
const Mechanism forward = make_mechanism(MechanismKind::forward);

const std::vector<Algorithm> complete_engines = {Algorithm::dfs, Algorithm::explained_dfs, Algorithm::backjump,
                                                 Algorithm::dynamic_v1, Algorithm::dynamic};

/// B=yellow and C=blue first, as in the walkthrough.
Heuristics walkthrough(const Problem &p)
{
    Heuristics h;
    h.preferences[var(p, "B")] = {val(p, "B", "yellow")};
    h.preferences[var(p, "C")] = {val(p, "C", "blue")};
    return h;
}

std::vector<std::string> lines(const Problem &p, const SearchTrace &trace)
{
    std::vector<std::string> out;
    std::istringstream in(format_trace(p, trace));
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

struct Recorder : SearchObserver {
    std::function<void(const Event &, const EngineView &)> fn;
    void on_event(const Event &e, const EngineView &v) override { fn(e, v); }
};

Problem unconstrained(int n, int d)
{
    std::vector<std::string> dom;
    for (int k = 0; k < d; ++k)
        dom.push_back(std::to_string(k));
    std::vector<VariableDecl> vs;
    for (int k = 0; k < n; ++k)
        vs.push_back({"v" + std::to_string(k), dom});
    return Problem(vs, {});
}

std::size_t count(const SearchTrace &t, EventKind kind)
{
    return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [&](const Event &e) { return e.kind == kind; }));
}

} // namespace

TEST_CASE("algorithm names and traits")
{
    for (auto a : {Algorithm::dfs, Algorithm::explained_dfs, Algorithm::backjump, Algorithm::dynamic_v1,
                   Algorithm::dynamic, Algorithm::oldest_culprit})
        CHECK(parse_algorithm(to_string(a)) == a);
    CHECK(parse_algorithm("dynamic-v1") == Algorithm::dynamic_v1);
    CHECK_FALSE(parse_algorithm("restarts"));

    CHECK(traits_of(Algorithm::dfs).values_only);
    CHECK(traits_of(Algorithm::backjump).pop_suffix);
    CHECK(traits_of(Algorithm::dynamic_v1).reselect_target);
    CHECK_FALSE(traits_of(Algorithm::dynamic).reselect_target);
    CHECK(traits_of(Algorithm::dynamic).merge_on_select);
    CHECK(traits_of(Algorithm::oldest_culprit).oldest_culprit);
}

TEST_CASE("dfs")
{
    const auto p = figure1_instance();
    const auto out = solve_dfs(p, basic, {}, {});
    REQUIRE(out.verdict == Verdict::solved);
    CHECK(is_solution(p, *out.solution));
    const auto t = lines(p, out.trace);
    REQUIRE(t.size() >= 2);
    CHECK(t[0] == "ASSIGN\tA\tred");
    CHECK(t[1] == "ASSIGN\tB\tred");

    SUBCASE("xyz enumerates all four (x, y) pairs")
    {
        const auto xyz = xyz_unsat_instance();
        std::set<std::pair<ValueIndex, ValueIndex>> seen;
        Recorder r;
        r.fn = [&](const Event &e, const EngineView &v) {
            if (e.kind == EventKind::assign && e.var == 1)
                seen.insert({v.partial.value_of(0), e.value});
        };
        SolveOptions o;
        o.observer = &r;
        CHECK(solve_dfs(xyz, basic, {}, {}, o).verdict == Verdict::unsat);
        CHECK(seen.size() == 4);
    }

    SUBCASE("single variable")
    {
        const auto one = Problem({{"x", {"0"}}}, {});
        const auto s = solve_dfs(one, basic, {}, {});
        REQUIRE(s.verdict == Verdict::solved);
        CHECK(*s.solution == Assignment{0});
        CHECK(s.stats.nodes_expanded == 1);
        CHECK(s.stats.backtracks == 0);
    }
}

TEST_CASE("explained dfs")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = random_binary_csp(6, 3, 0.5, 0.4, seed);
        const auto a = solve_dfs(p, basic, {}, {});
        const auto b = solve_explained_dfs(p, basic, {}, {});
        CHECK(a.verdict == b.verdict);
        CHECK(a.stats.nodes_expanded == b.stats.nodes_expanded);
        CHECK(a.stats.backtracks == b.stats.backtracks);
    }

    const auto p = figure1_instance();
    const auto out = solve_explained_dfs(p, basic, walkthrough(p), {});
    const auto dead = std::find_if(out.trace.begin(), out.trace.end(),
                                   [](const Event &e) { return e.kind == EventKind::dead_end; });
    REQUIRE(dead != out.trace.end());
    CHECK(dead->var == var(p, "E"));
    CHECK(dead->culprits == vars(p, {"A", "B", "D"}));
    const auto &jump = *std::next(dead);
    CHECK(jump.kind == EventKind::backjump);
    CHECK(jump.var == var(p, "D"));
    CHECK(jump.culprits == vars(p, {"A", "B"}));
    CHECK(solve_explained_dfs(xyz_unsat_instance(), basic, {}, {}).verdict == Verdict::unsat);
}

TEST_CASE("backjump")
{
    const auto p = figure1_instance();
    const auto out = solve_backjump(p, basic, walkthrough(p), {});
    REQUIRE(out.verdict == Verdict::solved);
    const auto jump = std::find_if(out.trace.begin(), out.trace.end(),
                                   [](const Event &e) { return e.kind == EventKind::backjump; });
    REQUIRE(jump != out.trace.end());
    CHECK(jump->var == var(p, "D"));

    const auto xyz = xyz_unsat_instance();
    const auto bj = solve_backjump(xyz, basic, {}, {});
    CHECK(bj.verdict == Verdict::unsat);
    CHECK(bj.stats.backtracks <= solve_dfs(xyz, basic, {}, {}).stats.backtracks);

    const auto free = solve_backjump(unconstrained(3, 2), basic, {}, {});
    CHECK(free.verdict == Verdict::solved);
    CHECK(free.stats.backtracks == 0);
}

TEST_CASE("backjump skips a culprit-free variable")
{
    // C is unconstrained, so a dead end at D jumps straight past it to A.
    const std::vector<std::string> ab{"a", "b"};
    const Problem p({{"A", ab}, {"C", ab}, {"D", ab}},
                    {{{"A", "D"}, RelationKind::allowed, {{"b", "a"}, {"b", "b"}}}});
    const auto out = solve_backjump(p, basic, {}, {});
    REQUIRE(out.verdict == Verdict::solved);
    const auto jump = std::find_if(out.trace.begin(), out.trace.end(),
                                   [](const Event &e) { return e.kind == EventKind::backjump; });
    REQUIRE(jump != out.trace.end());
    CHECK(jump->var == var(p, "A"));
    CHECK(out.stats.backtracks == 2);
    CHECK(out.stats.nodes_expanded < solve_dfs(p, basic, {}, {}).stats.nodes_expanded);
}

TEST_CASE("dynamic backtracking I")
{
    const auto p = figure1_instance();
    const auto B = var(p, "B"), C = var(p, "C"), D = var(p, "D");
    bool checked = false;
    Recorder r;
    r.fn = [&](const Event &e, const EngineView &v) {
        if (e.kind == EventKind::backjump && e.var == B) {
            CHECK(v.partial.is_bound(C));
            CHECK(v.partial.value_of(C) == val(p, "C", "blue"));
            CHECK(v.sets[C].contains(val(p, "C", "red")));
            CHECK(v.sets[C].culprits(val(p, "C", "red")) == vars(p, {"A"}));
            checked = true;
        }
    };
    SolveOptions o;
    o.observer = &r;
    const auto out = solve_dynamic_v1(p, basic, walkthrough(p), {}, o);
    REQUIRE(out.verdict == Verdict::solved);
    CHECK(checked);

    const auto jump = std::find_if(out.trace.begin(), out.trace.end(),
                                   [&](const Event &e) { return e.kind == EventKind::backjump && e.var == D; });
    REQUIRE(jump != out.trace.end());
    CHECK(jump->culprits == vars(p, {"A", "B"}));
    // D is reselected at once and has nothing left.
    auto next = std::next(jump);
    while (next->kind == EventKind::prune)
        ++next;
    CHECK(next->kind == EventKind::dead_end);
    CHECK(next->var == D);

    CHECK(solve_dynamic_v1(xyz_unsat_instance(), basic, {}, {}).verdict == Verdict::unsat);
}

TEST_CASE("dynamic backtracking")
{
    const auto p = figure1_instance();
    const auto out = solve_dynamic(p, basic, walkthrough(p), {});
    REQUIRE(out.verdict == Verdict::solved);
    CHECK(*out.solution ==
          assignment(p, {{"A", "red"}, {"B", "red"}, {"C", "blue"}, {"D", "yellow"}, {"E", "blue"}}));
    std::vector<std::string> order;
    for (auto b : out.final_partial.bindings())
        order.push_back(p.name(b.var));
    CHECK(order == std::vector<std::string>{"A", "C", "B", "D", "E"});

    const auto xyz = solve_dynamic(xyz_unsat_instance(), basic, {}, {});
    CHECK(xyz.verdict == Verdict::unsat);
    CHECK(xyz.stats.nodes_expanded <= 12);

    const auto free = solve_dynamic(unconstrained(4, 3), basic, {}, {});
    CHECK(free.verdict == Verdict::solved);
    CHECK(free.stats.backtracks == 0);
    CHECK(count(free.trace, EventKind::prune) == 0);
}

TEST_CASE("oldest culprit")
{
    Limits cap;
    cap.max_nodes = 100;
    const auto xyz = xyz_unsat_instance();
    const auto out = solve_oldest_culprit(xyz, basic, {}, cap);
    CHECK(out.verdict == Verdict::exhausted);
    CHECK(out.stats.nodes_expanded == 100);
    CHECK_THROWS_AS(solve_oldest_culprit(xyz, basic, {}, {}), std::invalid_argument);

    const auto fig = solve_oldest_culprit(figure1_instance(), basic, {}, cap);
    REQUIRE(fig.verdict == Verdict::solved);
    CHECK(is_solution(figure1_instance(), *fig.solution));
}

TEST_CASE("limits give Exhausted, never a wrong verdict")
{
    Limits none;
    none.max_backtracks = 0;
    for (auto a : complete_engines) {
        CHECK(solve(xyz_unsat_instance(), a, basic, {}, none).verdict == Verdict::exhausted);
        Limits nodes;
        nodes.max_nodes = 3;
        CHECK(solve(xyz_unsat_instance(), a, basic, {}, nodes).verdict == Verdict::exhausted);
    }
}

TEST_CASE("next_variable")
{
    const auto p = figure1_instance();
    auto sets = make_elimination_sets(p);
    Heuristics lex;
    CHECK(next_variable(lex, p, PartialSolution(5), sets) == 0);
    CHECK(next_variable(lex, p, partial(p, {{"A", "red"}, {"C", "blue"}}), sets) == var(p, "B"));

    Heuristics cheap;
    cheap.variable_rule = VariableRule::cheapest_first;
    const auto ps = partial(p, {{"A", "red"}, {"B", "yellow"}, {"C", "blue"}});
    sets[var(p, "D")].set(val(p, "D", "red"), vars(p, {"A"}));
    sets[var(p, "D")].set(val(p, "D", "yellow"), vars(p, {"B"}));
    sets[var(p, "E")].set(val(p, "E", "red"), vars(p, {"A"}));
    CHECK(next_variable(cheap, p, ps, sets) == var(p, "D"));

    sets[var(p, "E")].set(val(p, "E", "yellow"), vars(p, {"B"}));
    CHECK(next_variable(cheap, p, ps, sets) == var(p, "D"));
    CHECK(next_variable(cheap, p, PartialSolution(5), make_elimination_sets(p)) == 0);
}

TEST_CASE("every engine is sound and replayable")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto p = random_binary_csp(6, 3, 0.6, 0.35, seed);
        for (auto a : complete_engines)
            for (const auto *m : {&basic, &forward}) {
                SolveOptions o;
                o.check_invariants = true;
                Heuristics h;
                h.variable_rule = seed % 2 ? VariableRule::cheapest_first : VariableRule::lexicographic;
                const auto out = solve(p, a, *m, h, {}, o);
                CHECK(out.verdict != Verdict::exhausted);
                if (out.solution)
                    CHECK(is_solution(p, *out.solution));
                const auto state = replay(p, a, out.trace);
                CHECK(state.partial == out.final_partial);
                CHECK(state.sets == out.final_sets);
                CHECK(out.stats.max_elimination_entries <= 6 * 6 * 3);
            }
    }
}

TEST_CASE("seeded random values are reproducible")
{
    const auto p = random_binary_csp(8, 4, 0.5, 0.3, 3);
    Heuristics h;
    h.value_rule = ValueRule::seeded_random;
    h.seed = 99;
    const auto a = solve_dynamic(p, forward, h, {});
    const auto b = solve_dynamic(p, forward, h, {});
    CHECK(a.trace == b.trace);
    h.seed = 100;
    const auto c = solve_dynamic(p, forward, h, {});
    CHECK(c.verdict == a.verdict);
}

TEST_CASE("trace text round trip")
{
    const auto p = figure1_instance();
    const auto out = solve_dynamic(p, basic, walkthrough(p), {});
    const auto text = format_trace(p, out.trace);
    CHECK(format_trace(p, parse_trace(p, text)) == text);
    CHECK(render_tables(p, Algorithm::dynamic, out.trace).find("# BACKJUMP B") != std::string::npos);

    std::size_t tables = 0;
    const auto rendered = render_tables(p, Algorithm::dynamic, out.trace);
    for (std::size_t at = rendered.find("# "); at != std::string::npos; at = rendered.find("\n# ", at + 1))
        ++tables;
    CHECK(tables == 4);

    const auto free = unconstrained(3, 2);
    CHECK(render_tables(free, Algorithm::dynamic, solve_dynamic(free, basic, {}, {}).trace).empty());
}
