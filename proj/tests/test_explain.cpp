#include "support.hpp"

#include <dynabt/explain.hpp>
#include <dynabt/instances.hpp>

#include <doctest.h>

using namespace dynabt;
using namespace dynabt::test;

namespace {

EliminationSet set_of(const Problem &p, const std::string &owner,
                      const std::vector<std::pair<std::string, std::vector<std::string>>> &entries)
{
    EliminationSet e(var(p, owner), p.domain_size(var(p, owner)));
    for (const auto &[value, culprits] : entries)
        e.set(val(p, owner, value), vars(p, culprits));
    return e;
}

/// Forward-checking oracle written against the declarations: v is dead for i
/// when it breaks a completed constraint or leaves an unassigned k with no
/// value compatible with every constraint over the bound variables, i and k.
std::vector<ValueIndex> forward_dead(const Problem &p, const PartialSolution &ps, VarIndex i)
{
    auto consistent = [&](const std::vector<ValueIndex> &a) {
        for (std::size_t c = 0; c < p.num_constraints(); ++c) {
            const auto &con = p.constraint(c);
            std::vector<ValueIndex> tuple;
            for (auto s : con.scope()) {
                if (a[s] == npos)
                    break;
                tuple.push_back(a[s]);
            }
            if (tuple.size() == con.arity() && !con.allows(tuple))
                return false;
        }
        return true;
    };
    std::vector<ValueIndex> base(p.num_variables(), npos);
    for (auto b : ps.bindings())
        base[b.var] = b.value;
    std::vector<ValueIndex> dead;
    for (ValueIndex v = 0; v < static_cast<ValueIndex>(p.domain_size(i)); ++v) {
        auto a = base;
        a[i] = v;
        bool ok = consistent(a);
        for (VarIndex k = 0; ok && k < static_cast<VarIndex>(p.num_variables()); ++k) {
            if (a[k] != npos)
                continue;
            bool some = false;
            for (ValueIndex w = 0; !some && w < static_cast<ValueIndex>(p.domain_size(k)); ++w) {
                a[k] = w;
                some = consistent(a);
            }
            a[k] = npos;
            ok = some;
        }
        if (!ok)
            dead.push_back(v);
    }
    return dead;
}

std::vector<ValueIndex> values(const Explanations &es)
{
    std::vector<ValueIndex> out;
    for (const auto &e : es)
        out.push_back(e.value);
    return out;
}

} // namespace

TEST_CASE("eliminate_basic on the five-country map")
{
    const auto p = figure1_instance();
    const auto C = var(p, "C"), D = var(p, "D");
    CHECK(eliminate_basic(p, partial(p, {{"A", "red"}, {"B", "yellow"}}), C) ==
          Explanations{{val(p, "C", "red"), vars(p, {"A"})}});
    CHECK(eliminate_basic(p, partial(p, {{"A", "red"}, {"B", "yellow"}, {"C", "blue"}}), D) ==
          Explanations{{val(p, "D", "red"), vars(p, {"A"})}, {val(p, "D", "yellow"), vars(p, {"B"})}});
    for (VarIndex i = 0; i < 5; ++i)
        CHECK(eliminate_basic(p, PartialSolution(5), i).empty());
}

TEST_CASE("eliminate_forward finds the Denmark nogood before England dead-ends")
{
    const auto p = figure1_instance();
    const auto out = eliminate_forward(p, partial(p, {{"A", "red"}, {"B", "yellow"}, {"C", "blue"}}), var(p, "D"));
    CHECK(out == Explanations{{val(p, "D", "red"), vars(p, {"A"})},
                              {val(p, "D", "yellow"), vars(p, {"B"})},
                              {val(p, "D", "blue"), vars(p, {"A", "B"})}});
    for (VarIndex i = 0; i < 5; ++i)
        CHECK(eliminate_forward(p, PartialSolution(5), i).empty());
}

TEST_CASE("eliminate_forward on a 2x2 crossword")
{
    const auto frame = CrosswordFrame::parse("..\n..\n");
    const auto p = crossword_csp(frame, {"ab", "ba", "aa"});
    REQUIRE(p.num_variables() == 4);
    const auto ps = partial(p, {{"A0_0", "ab"}});
    const auto i = var(p, "A1_0");
    // D0_1 must start with b, so the second row cannot end in b.
    CHECK(eliminate_basic(p, ps, i).empty());
    CHECK(eliminate_forward(p, ps, i) == Explanations{{val(p, "A1_0", "ab"), vars(p, {"A0_0"})}});

    for (const auto &word : p.variables()[0].domain)
        for (VarIndex k = 1; k < 4; ++k) {
            const auto q = partial(p, {{"A0_0", word}});
            const auto got = eliminate_forward(p, q, k);
            CHECK(values(got) == forward_dead(p, q, k));
            for (const auto &e : got)
                CHECK(e.culprits == vars(p, {"A0_0"}));
        }
}

TEST_CASE("eliminate_forward matches the oracle and covers eliminate_basic")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto p = random_binary_csp(5, 3, 0.6, 0.4, seed);
        for (ValueIndex a = 0; a < 3; ++a)
            for (ValueIndex b = 0; b < 3; ++b) {
                PartialSolution ps(5);
                ps.bind(0, a);
                if (violates(p, ps, {3, b}))
                    continue;
                ps.bind(3, b);
                for (VarIndex i : {1, 2, 4}) {
                    const auto basic = values(eliminate_basic(p, ps, i));
                    const auto forward = eliminate_forward(p, ps, i);
                    const auto fv = values(forward);
                    CHECK(std::includes(fv.begin(), fv.end(), basic.begin(), basic.end()));
                    CHECK(fv == forward_dead(p, ps, i));
                    for (const auto &e : forward) {
                        CHECK(e.culprits.subset_of(ps.assigned()));
                        CHECK_FALSE(e.culprits.contains(i));
                    }
                }
            }
    }
}

TEST_CASE("eliminate_blame_everything blames the whole partial solution")
{
    const auto p = figure1_instance();
    const auto ps = partial(p, {{"A", "red"}, {"B", "yellow"}, {"C", "blue"}});
    const auto out = eliminate_blame_everything(p, ps, var(p, "D"));
    REQUIRE(out.size() == 2);
    for (const auto &e : out)
        CHECK(e.culprits == vars(p, {"A", "B", "C"}));
}

TEST_CASE("mechanism names")
{
    CHECK(parse_mechanism("basic") == MechanismKind::basic);
    CHECK(parse_mechanism("forward") == MechanismKind::forward);
    CHECK(parse_mechanism("blame-everything") == MechanismKind::blame_everything);
    CHECK_FALSE(parse_mechanism("arc"));
    for (auto k : {MechanismKind::basic, MechanismKind::forward, MechanismKind::blame_everything})
        CHECK(parse_mechanism(to_string(k)) == k);
}

TEST_CASE("merge")
{
    const auto p = figure1_instance();
    const auto red = val(p, "C", "red"), yellow = val(p, "C", "yellow");
    const auto A = var(p, "A"), B = var(p, "B");

    auto m = merge(set_of(p, "C", {{"red", {"A"}}}), {{yellow, {B}}});
    CHECK(m == set_of(p, "C", {{"red", {"A"}}, {"yellow", {"B"}}}));

    CHECK(merge(set_of(p, "C", {{"red", {"A", "B"}}}), {{red, {A}}}) == set_of(p, "C", {{"red", {"A"}}}));
    CHECK(merge(set_of(p, "C", {}), {}) == set_of(p, "C", {}));

    SUBCASE("only a strict subset replaces")
    {
        CHECK(merge(set_of(p, "C", {{"red", {"A"}}}), {{red, {B}}}) == set_of(p, "C", {{"red", {"A"}}}));
        CHECK(merge(set_of(p, "C", {{"red", {"A", "B"}}}), {{red, {var(p, "D")}}}) ==
              set_of(p, "C", {{"red", {"A", "B"}}}));
        EliminationSet e(var(p, "C"), 3);
        CHECK(e.offer({red, {A, B}}) == MergeResult::inserted);
        CHECK(e.offer({red, {A, B}}) == MergeResult::kept);
        CHECK(e.offer({red, {B}}) == MergeResult::replaced);
        CHECK(e.size() == 1);
    }

    SUBCASE("idempotent")
    {
        const Explanations fresh{{red, {B}}, {yellow, {A, B}}};
        const auto once = merge(set_of(p, "C", {{"red", {"A"}}}), fresh);
        CHECK(merge(once, fresh) == once);
    }
}

TEST_CASE("eliminated_values and culprit_union")
{
    const auto p = figure1_instance();
    const auto england = set_of(p, "E", {{"red", {"A"}}, {"yellow", {"B"}}, {"blue", {"D"}}});
    CHECK(eliminated_values(england) == std::vector<ValueIndex>{0, 1, 2});
    CHECK(england.exhausted());
    CHECK(culprit_union(england) == vars(p, {"A", "B", "D"}));
    CHECK(england.storage() == 3);

    const auto denmark = set_of(p, "D", {{"red", {"A"}}, {"yellow", {"B"}}, {"blue", {"A", "B"}}});
    CHECK(culprit_union(denmark) == vars(p, {"A", "B"}));

    CHECK(eliminated_values(set_of(p, "C", {})).empty());
    CHECK(culprit_union(set_of(p, "C", {})).empty());
    CHECK(eliminated_values(set_of(p, "C", {{"red", {"A"}}})) == std::vector<ValueIndex>{0});
}

TEST_CASE("prune_involving")
{
    const auto p = figure1_instance();
    auto sets = make_elimination_sets(p);
    sets[var(p, "C")] = set_of(p, "C", {{"red", {"A"}}});
    sets[var(p, "D")] = set_of(p, "D", {{"red", {"A"}}, {"yellow", {"B"}}});
    sets[var(p, "E")] = set_of(p, "E", {{"red", {"A"}}, {"yellow", {"B"}}, {"blue", {"D"}}});

    SUBCASE("popping Denmark")
    {
        const auto before = sets;
        const auto removed = prune_involving(sets, var(p, "D"));
        REQUIRE(removed.size() == 1);
        CHECK(removed[0].var == var(p, "E"));
        CHECK(removed[0].value == val(p, "E", "blue"));
        CHECK(sets[var(p, "E")] == set_of(p, "E", {{"red", {"A"}}, {"yellow", {"B"}}}));
        CHECK(sets[var(p, "C")] == before[var(p, "C")]);
        CHECK(sets[var(p, "D")] == before[var(p, "D")]);
    }

    SUBCASE("popping Bulgaria")
    {
        sets[var(p, "D")].set(val(p, "D", "blue"), vars(p, {"A", "B"}));
        sets[var(p, "E")].erase(val(p, "E", "blue"));
        const auto removed = prune_involving(sets, var(p, "B"));
        REQUIRE(removed.size() == 3);
        CHECK(removed[0].var == var(p, "D"));
        CHECK(removed[0].value == val(p, "D", "yellow"));
        CHECK(removed[1].var == var(p, "D"));
        CHECK(removed[1].value == val(p, "D", "blue"));
        CHECK(removed[2].var == var(p, "E"));
        CHECK(removed[2].value == val(p, "E", "yellow"));
        for (const char *k : {"C", "D", "E"})
            CHECK(sets[var(p, k)] == set_of(p, k, {{"red", {"A"}}}));
    }

    SUBCASE("a variable nobody blames")
    {
        const auto before = sets;
        CHECK(prune_involving(sets, var(p, "C")).empty());
        CHECK(sets == before);
    }
}
