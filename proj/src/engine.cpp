#include <dynabt/engine.hpp>

#include <random>
#include <stdexcept>

namespace dynabt {

std::optional<VariableRule> parse_variable_rule(std::string_view name)
{
    if (name == "lexicographic")
        return VariableRule::lexicographic;
    if (name == "cheapest-first")
        return VariableRule::cheapest_first;
    return std::nullopt;
}

std::optional<ValueRule> parse_value_rule(std::string_view name)
{
    if (name == "lexicographic")
        return ValueRule::lexicographic;
    if (name == "seeded-random")
        return ValueRule::seeded_random;
    return std::nullopt;
}

std::string_view to_string(VariableRule rule)
{
    return rule == VariableRule::lexicographic ? "lexicographic" : "cheapest-first";
}

std::string_view to_string(ValueRule rule)
{
    return rule == ValueRule::lexicographic ? "lexicographic" : "seeded-random";
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::solved: return "Solved";
    case Verdict::unsat: return "Unsat";
    case Verdict::exhausted: return "Exhausted";
    }
    return "?";
}

VarIndex next_variable(const Heuristics &heuristics, const Problem &problem, const PartialSolution &partial,
                       const EliminationSets &sets)
{
    VarIndex best = npos;
    std::size_t best_remaining = 0;
    for (VarIndex v = 0; v < static_cast<VarIndex>(problem.num_variables()); ++v) {
        if (partial.is_bound(v))
            continue;
        if (heuristics.variable_rule == VariableRule::lexicographic)
            return v;
        const auto remaining = problem.domain_size(v) - sets[v].size();
        if (best == npos || remaining < best_remaining) {
            best = v;
            best_remaining = remaining;
        }
    }
    if (best == npos)
        throw std::logic_error("next_variable: every variable is assigned");
    return best;
}

namespace {

class Engine {
public:
    Engine(const Problem &problem, Algorithm algorithm, const Mechanism &mechanism, const Heuristics &heuristics,
           const Limits &limits, const SolveOptions &options)
        : problem_(problem), algorithm_(algorithm), traits_(traits_of(algorithm)), mechanism_(mechanism),
          heuristics_(heuristics), limits_(limits), options_(options), rng_(heuristics.seed),
          partial_(problem.num_variables()), sets_(make_elimination_sets(problem))
    {
    }

    SearchOutcome run();

private:
    VarIndex select_variable();
    std::optional<ValueIndex> choose_value(VarIndex i);
    Explanations explain(VarIndex i) const;
    void emit(Event event);
    void update_peaks();
    void check_liveness() const;
    SearchOutcome finish(Verdict verdict, EventKind kind);

    const Problem &problem_;
    Algorithm algorithm_;
    StrategyTraits traits_;
    const Mechanism &mechanism_;
    const Heuristics &heuristics_;
    const Limits &limits_;
    const SolveOptions &options_;
    std::mt19937_64 rng_;

    PartialSolution partial_;
    EliminationSets sets_;
    SearchStats stats_;
    SearchTrace trace_;
    std::size_t events_ = 0;
};

Explanations Engine::explain(VarIndex i) const
{
    auto fresh = mechanism_(problem_, partial_, i);
    if (traits_.values_only)
        for (auto &e : fresh)
            e.culprits = {};
    return fresh;
}

void Engine::emit(Event event)
{
    const auto index = events_++;
    const auto kind = event.kind;
    if (options_.observer)
        options_.observer->on_event(event, EngineView{problem_, algorithm_, partial_, sets_, index});
    if (options_.record_trace)
        trace_.push_back(std::move(event));
    // Between a backjump and its prunes the sets still cite the popped variable.
    if (options_.check_invariants && traits_.merge_on_select && kind != EventKind::backjump &&
        kind != EventKind::prune)
        check_liveness();
}

void Engine::check_liveness() const
{
    for (const auto &set : sets_)
        for (ValueIndex v = 0; v < static_cast<ValueIndex>(set.domain_size()); ++v)
            if (set.contains(v))
                for (auto c : set.culprits(v))
                    if (!partial_.is_bound(c))
                        throw std::logic_error("liveness: explanation for " + problem_.name(set.owner()) +
                                               " cites unbound " + problem_.name(c));
}

void Engine::update_peaks()
{
    std::uint64_t entries = 0, storage = 0;
    for (const auto &set : sets_) {
        entries += set.size();
        storage += set.storage();
    }
    stats_.max_elimination_entries = std::max(stats_.max_elimination_entries, entries);
    stats_.max_elimination_storage = std::max(stats_.max_elimination_storage, storage);
}

VarIndex Engine::select_variable()
{
    VarIndex i;
    std::optional<Explanations> fresh;
    if (heuristics_.variable_rule == VariableRule::lexicographic) {
        i = next_variable(heuristics_, problem_, partial_, sets_);
    }
    else {
        std::vector<Explanations> cache(problem_.num_variables());
        std::size_t best_remaining = 0;
        i = npos;
        for (VarIndex k = 0; k < static_cast<VarIndex>(problem_.num_variables()); ++k) {
            if (partial_.is_bound(k))
                continue;
            cache[k] = explain(k);
            std::size_t eliminated = traits_.merge_on_select ? sets_[k].size() : 0;
            for (const auto &e : cache[k])
                if (!traits_.merge_on_select || !sets_[k].contains(e.value))
                    ++eliminated;
            const auto remaining = problem_.domain_size(k) - eliminated;
            if (i == npos || remaining < best_remaining) {
                i = k;
                best_remaining = remaining;
            }
        }
        fresh = std::move(cache[i]);
    }
    if (!fresh)
        fresh = explain(i);

    if (!traits_.merge_on_select && !sets_[i].empty()) {
        sets_[i].clear();
        emit({.kind = EventKind::reset, .var = i, .value = npos, .culprits = {}});
    }
    for (const auto &e : *fresh) {
        const auto result = sets_[i].offer(e);
        if (result != MergeResult::kept)
            emit({.kind = EventKind::eliminate,
                  .var = i,
                  .value = e.value,
                  .culprits = e.culprits,
                  .replaced = result == MergeResult::replaced});
    }
    update_peaks();
    return i;
}

std::optional<ValueIndex> Engine::choose_value(VarIndex i)
{
    const auto &set = sets_[i];
    if (auto pref = heuristics_.preferences.find(i); pref != heuristics_.preferences.end())
        for (auto v : pref->second)
            if (v >= 0 && v < static_cast<ValueIndex>(set.domain_size()) && !set.contains(v))
                return v;

    std::vector<ValueIndex> remaining;
    for (ValueIndex v = 0; v < static_cast<ValueIndex>(set.domain_size()); ++v)
        if (!set.contains(v))
            remaining.push_back(v);
    if (remaining.empty())
        return std::nullopt;
    if (heuristics_.value_rule == ValueRule::lexicographic)
        return remaining.front();
    return remaining[rng_() % remaining.size()];
}

SearchOutcome Engine::finish(Verdict verdict, EventKind kind)
{
    emit({.kind = kind, .var = npos, .value = npos, .culprits = {}});
    SearchOutcome out;
    out.verdict = verdict;
    if (verdict == Verdict::solved)
        out.solution = partial_.to_assignment();
    out.stats = stats_;
    out.trace = std::move(trace_);
    out.final_partial = partial_;
    out.final_sets = sets_;
    return out;
}

SearchOutcome Engine::run()
{
    while (true) {
        if (partial_.complete()) {
            if (options_.check_invariants && !is_solution(problem_, partial_.to_assignment()))
                throw std::logic_error("soundness: complete partial solution violates a constraint");
            return finish(Verdict::solved, EventKind::solve);
        }

        VarIndex i = select_variable();
        while (true) {
            if (auto v = choose_value(i)) {
                if (limits_.max_nodes && stats_.nodes_expanded >= *limits_.max_nodes)
                    return finish(Verdict::exhausted, EventKind::exhausted);
                partial_.bind(i, *v);
                ++stats_.nodes_expanded;
                emit({.kind = EventKind::assign, .var = i, .value = *v, .culprits = {}});
                break;
            }

            // Dead end: every value of i is eliminated.
            const VarSet culprits = culprit_union(sets_[i]);
            emit({.kind = EventKind::dead_end, .var = i, .culprits = culprits});
            if (options_.check_invariants && !sets_[i].exhausted())
                throw std::logic_error("dead end reached with values remaining");

            int target = npos;
            if (traits_.chronological) {
                if (partial_.empty())
                    return finish(Verdict::unsat, EventKind::fail);
                target = static_cast<int>(partial_.size()) - 1;
            }
            else {
                if (culprits.empty())
                    return finish(Verdict::unsat, EventKind::fail);
                const auto bindings = partial_.bindings();
                for (int pos = 0; pos < static_cast<int>(bindings.size()); ++pos)
                    if (culprits.contains(bindings[pos].var)) {
                        target = pos;
                        if (traits_.oldest_culprit)
                            break;
                    }
                if (target == npos)
                    throw std::logic_error("backjump: no culprit of " + problem_.name(i) + " is bound");
            }

            const Binding popped = partial_.bindings()[target];
            const VarIndex j = popped.var;
            if (traits_.pop_suffix)
                stats_.backtracks += partial_.truncate(static_cast<std::size_t>(target)).size();
            else {
                partial_.unbind(j);
                ++stats_.backtracks;
            }

            VarSet reason;
            if (!traits_.values_only) {
                for (auto c : culprits)
                    if (traits_.chronological ? c != j : partial_.is_bound(c))
                        reason.insert(c);
            }
            if (sets_[j].contains(popped.value))
                throw std::logic_error("backjump target value was already eliminated");
            sets_[j].set(popped.value, reason);
            emit({.kind = EventKind::backjump, .var = j, .value = popped.value, .culprits = reason, .position = target});

            if (traits_.merge_on_select)
                for (auto &removal : prune_involving(sets_, j))
                    emit({.kind = EventKind::prune,
                          .var = removal.var,
                          .value = removal.value,
                          .culprits = std::move(removal.culprits),
                          .cause = j});

            if (traits_.refresh_target)
                for (const auto &e : explain(j)) {
                    const auto result = sets_[j].offer(e);
                    if (result != MergeResult::kept)
                        emit({.kind = EventKind::eliminate,
                              .var = j,
                              .value = e.value,
                              .culprits = e.culprits,
                              .replaced = result == MergeResult::replaced});
                }
            update_peaks();

            if (limits_.max_backtracks && stats_.backtracks > *limits_.max_backtracks)
                return finish(Verdict::exhausted, EventKind::exhausted);

            if (!traits_.reselect_target)
                break;
            i = j;
        }
    }
}

} // namespace

SearchOutcome solve(const Problem &problem, Algorithm algorithm, const Mechanism &mechanism,
                    const Heuristics &heuristics, const Limits &limits, const SolveOptions &options)
{
    problem.require_well_formed();
    if (algorithm == Algorithm::oldest_culprit && !limits.max_nodes)
        throw std::invalid_argument("oldest-culprit search may not terminate; a node limit is required");
    Engine engine(problem, algorithm, mechanism, heuristics, limits, options);
    return engine.run();
}

SearchOutcome solve_dfs(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                        const SolveOptions &o)
{
    return solve(p, Algorithm::dfs, m, h, l, o);
}

SearchOutcome solve_explained_dfs(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                                  const SolveOptions &o)
{
    return solve(p, Algorithm::explained_dfs, m, h, l, o);
}

SearchOutcome solve_backjump(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                             const SolveOptions &o)
{
    return solve(p, Algorithm::backjump, m, h, l, o);
}

SearchOutcome solve_dynamic_v1(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                               const SolveOptions &o)
{
    return solve(p, Algorithm::dynamic_v1, m, h, l, o);
}

SearchOutcome solve_dynamic(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                            const SolveOptions &o)
{
    return solve(p, Algorithm::dynamic, m, h, l, o);
}

SearchOutcome solve_oldest_culprit(const Problem &p, const Mechanism &m, const Heuristics &h, const Limits &l,
                                   const SolveOptions &o)
{
    return solve(p, Algorithm::oldest_culprit, m, h, l, o);
}

} // namespace dynabt
