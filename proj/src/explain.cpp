#include <dynabt/explain.hpp>

#include <stdexcept>

namespace dynabt {

std::optional<MechanismKind> parse_mechanism(std::string_view name)
{
    if (name == "basic")
        return MechanismKind::basic;
    if (name == "forward")
        return MechanismKind::forward;
    if (name == "blame-everything")
        return MechanismKind::blame_everything;
    return std::nullopt;
}

std::string_view to_string(MechanismKind kind)
{
    switch (kind) {
    case MechanismKind::basic: return "basic";
    case MechanismKind::forward: return "forward";
    case MechanismKind::blame_everything: return "blame-everything";
    }
    return "?";
}

Mechanism make_mechanism(MechanismKind kind)
{
    switch (kind) {
    case MechanismKind::basic: return eliminate_basic;
    case MechanismKind::forward: return eliminate_forward;
    case MechanismKind::blame_everything: return eliminate_blame_everything;
    }
    throw std::invalid_argument("unknown mechanism");
}

namespace {

VarSet other_vars(const CompiledConstraint &con, VarIndex a, VarIndex b = npos)
{
    VarSet out;
    for (auto v : con.scope())
        if (v != a && v != b)
            out.insert(v);
    return out;
}

struct KillTest {
    // Constraints on k that are completed under P-bar + {i, k} and mention i.
    std::vector<std::size_t> with_i;
    // k's values that survive every completed constraint not mentioning i.
    Bitset alive;
};

// Value of `v` when it is `i` or `k`, otherwise its binding in `partial`.
// Returns false when some scope variable is unbound.
bool fill_tuple(const CompiledConstraint &con, const PartialSolution &partial, Binding a, Binding b,
                std::vector<ValueIndex> &tuple)
{
    tuple.clear();
    for (auto v : con.scope()) {
        if (v == a.var)
            tuple.push_back(a.value);
        else if (v == b.var)
            tuple.push_back(b.value);
        else if (partial.is_bound(v))
            tuple.push_back(partial.value_of(v));
        else
            return false;
    }
    return true;
}

} // namespace

Explanations eliminate_basic(const Problem &problem, const PartialSolution &partial, VarIndex i)
{
    // Completed constraints on i in declaration order; binary ones are
    // answered from the support rows of the partner's value.
    struct Completed {
        std::size_t index;
        const Bitset *row;
        VarSet culprits;
    };
    std::vector<Completed> completed;
    for (auto c : problem.constraints_on(i)) {
        const auto &con = problem.constraint(c);
        bool complete = true;
        for (auto v : con.scope())
            if (v != i && !partial.is_bound(v)) {
                complete = false;
                break;
            }
        if (!complete)
            continue;
        const Bitset *row = nullptr;
        if (con.arity() == 2) {
            const int side_other = con.scope()[0] == i ? 1 : 0;
            row = &con.support(side_other, partial.value_of(con.scope()[side_other]));
        }
        completed.push_back({c, row, other_vars(con, i)});
    }

    Explanations out;
    if (completed.empty())
        return out;
    std::vector<ValueIndex> tuple;
    for (ValueIndex v = 0; v < static_cast<ValueIndex>(problem.domain_size(i)); ++v)
        for (const auto &c : completed) {
            const auto &con = problem.constraint(c.index);
            bool allowed;
            if (c.row)
                allowed = c.row->test(static_cast<std::size_t>(v));
            else {
                fill_tuple(con, partial, {i, v}, {}, tuple);
                allowed = con.allows(tuple);
            }
            if (!allowed) {
                out.push_back({v, c.culprits});
                break;
            }
        }
    return out;
}

Explanations eliminate_blame_everything(const Problem &problem, const PartialSolution &partial, VarIndex i)
{
    auto out = eliminate_basic(problem, partial, i);
    const auto everyone = partial.assigned();
    for (auto &e : out)
        e.culprits = everyone;
    return out;
}

Explanations eliminate_forward(const Problem &problem, const PartialSolution &partial, VarIndex i)
{
    auto out = eliminate_basic(problem, partial, i);
    const auto basic = static_cast<std::ptrdiff_t>(out.size());
    const auto di = problem.domain_size(i);
    std::vector<bool> eliminated(di, false);
    for (const auto &e : out)
        eliminated[e.value] = true;

    std::vector<ValueIndex> tuple;
    Bitset survivors, remaining;
    std::vector<VarIndex> witnesses;
    std::vector<KillTest> tests;
    for (VarIndex k = 0; k < static_cast<VarIndex>(problem.num_variables()); ++k) {
        if (k == i || partial.is_bound(k))
            continue;
        KillTest test;
        test.alive.resize(problem.domain_size(k));
        test.alive.set();
        for (auto c : problem.constraints_on(k)) {
            const auto &con = problem.constraint(c);
            bool mentions_i = false, complete = true;
            for (auto v : con.scope()) {
                if (v == i)
                    mentions_i = true;
                else if (v != k && !partial.is_bound(v))
                    complete = false;
            }
            if (!complete)
                continue;
            if (mentions_i) {
                test.with_i.push_back(c);
                continue;
            }
            if (con.arity() == 2) {
                const int side_other = con.scope()[0] == k ? 1 : 0;
                test.alive &= con.support(side_other, partial.value_of(con.scope()[side_other]));
                continue;
            }
            for (auto w = test.alive.find_first(); w != Bitset::npos; w = test.alive.find_next(w)) {
                fill_tuple(con, partial, {k, static_cast<ValueIndex>(w)}, {}, tuple);
                if (!con.allows(tuple))
                    test.alive.reset(w);
            }
        }
        if (test.with_i.empty() && test.alive.any())
            continue;
        witnesses.push_back(k);
        tests.push_back(std::move(test));
    }
    if (witnesses.empty())
        return out;

    for (ValueIndex v = 0; v < static_cast<ValueIndex>(di); ++v) {
        if (eliminated[v])
            continue;
        for (std::size_t t = 0; t < witnesses.size(); ++t) {
            const auto k = witnesses[t];
            const auto &test = tests[t];
            bool survives;
            if (test.with_i.size() == 1 && problem.constraint(test.with_i[0]).arity() == 2) {
                const auto &con = problem.constraint(test.with_i[0]);
                survives = test.alive.intersects(con.support(con.scope()[0] == i ? 0 : 1, v));
            }
            else {
                survivors = test.alive;
                for (auto c : test.with_i) {
                    if (survivors.none())
                        break;
                    const auto &con = problem.constraint(c);
                    if (con.arity() == 2) {
                        survivors &= con.support(con.scope()[0] == i ? 0 : 1, v);
                        continue;
                    }
                    for (auto w = survivors.find_first(); w != Bitset::npos; w = survivors.find_next(w)) {
                        fill_tuple(con, partial, {i, v}, {k, static_cast<ValueIndex>(w)}, tuple);
                        if (!con.allows(tuple))
                            survivors.reset(w);
                    }
                }
                survives = survivors.any();
            }
            if (survives)
                continue;

            // k is wiped out by i = v. Walk k's constraints in declaration
            // order; each one is blamed for the values it kills first.
            VarSet culprits;
            remaining.resize(problem.domain_size(k));
            remaining.set();
            for (auto c : problem.constraints_on(k)) {
                const auto &con = problem.constraint(c);
                bool complete = true;
                for (auto u : con.scope())
                    if (u != i && u != k && !partial.is_bound(u)) {
                        complete = false;
                        break;
                    }
                if (!complete)
                    continue;
                bool kills = false;
                if (con.arity() == 2) {
                    const int side_other = con.scope()[0] == k ? 1 : 0;
                    const auto other = con.scope()[side_other];
                    const auto &row = con.support(side_other, other == i ? v : partial.value_of(other));
                    kills = !remaining.is_subset_of(row);
                    remaining &= row;
                }
                else
                    for (auto w = remaining.find_first(); w != Bitset::npos; w = remaining.find_next(w)) {
                        fill_tuple(con, partial, {i, v}, {k, static_cast<ValueIndex>(w)}, tuple);
                        if (!con.allows(tuple)) {
                            remaining.reset(w);
                            kills = true;
                        }
                    }
                if (kills)
                    culprits.merge(other_vars(con, i, k));
                if (remaining.none())
                    break;
            }
            out.push_back({v, std::move(culprits)});
            break;
        }
    }
    std::inplace_merge(out.begin(), out.begin() + basic, out.end(),
                       [](const Explanation &a, const Explanation &b) { return a.value < b.value; });
    return out;
}

MergeResult EliminationSet::offer(const Explanation &e)
{
    auto &slot = entries_.at(e.value);
    if (!slot) {
        slot = e.culprits;
        ++count_;
        return MergeResult::inserted;
    }
    if (e.culprits.size() < slot->size() && e.culprits.subset_of(*slot)) {
        slot = e.culprits;
        return MergeResult::replaced;
    }
    return MergeResult::kept;
}

void EliminationSet::set(ValueIndex v, VarSet culprits)
{
    auto &slot = entries_.at(v);
    if (!slot)
        ++count_;
    slot = std::move(culprits);
}

bool EliminationSet::erase(ValueIndex v)
{
    auto &slot = entries_.at(v);
    if (!slot)
        return false;
    slot.reset();
    --count_;
    return true;
}

void EliminationSet::clear()
{
    for (auto &slot : entries_)
        slot.reset();
    count_ = 0;
}

std::size_t EliminationSet::storage() const
{
    std::size_t total = 0;
    for (const auto &slot : entries_)
        if (slot)
            total += slot->size();
    return total;
}

Explanations EliminationSet::entries() const
{
    Explanations out;
    for (std::size_t v = 0; v < entries_.size(); ++v)
        if (entries_[v])
            out.push_back({static_cast<ValueIndex>(v), *entries_[v]});
    return out;
}

EliminationSets make_elimination_sets(const Problem &problem)
{
    EliminationSets sets;
    sets.reserve(problem.num_variables());
    for (VarIndex v = 0; v < static_cast<VarIndex>(problem.num_variables()); ++v)
        sets.emplace_back(v, problem.domain_size(v));
    return sets;
}

EliminationSet merge(EliminationSet existing, const Explanations &fresh)
{
    for (const auto &e : fresh)
        existing.offer(e);
    return existing;
}

std::vector<ValueIndex> eliminated_values(const EliminationSet &e)
{
    std::vector<ValueIndex> out;
    for (ValueIndex v = 0; v < static_cast<ValueIndex>(e.domain_size()); ++v)
        if (e.contains(v))
            out.push_back(v);
    return out;
}

VarSet culprit_union(const EliminationSet &e)
{
    VarSet out;
    for (ValueIndex v = 0; v < static_cast<ValueIndex>(e.domain_size()); ++v)
        if (e.contains(v))
            out.merge(e.culprits(v));
    return out;
}

std::vector<Removal> prune_involving(EliminationSets &sets, VarIndex j)
{
    std::vector<Removal> removed;
    for (auto &set : sets)
        for (ValueIndex v = 0; v < static_cast<ValueIndex>(set.domain_size()); ++v)
            if (set.contains(v) && set.culprits(v).contains(j)) {
                removed.push_back({set.owner(), v, set.culprits(v)});
                set.erase(v);
            }
    return removed;
}

} // namespace dynabt
