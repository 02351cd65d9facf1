#include <dynabt/verify.hpp>

#include <json.hpp>

#include <algorithm>

namespace dynabt {

namespace {

bool holds_in(const std::vector<Binding> &bindings, const PartialSolution &partial)
{
    for (const auto &b : bindings)
        if (!partial.is_bound(b.var) || partial.value_of(b.var) != b.value)
            return false;
    return true;
}

// Both sorted by variable.
bool sub_cube(const std::vector<Binding> &a, const std::vector<Binding> &b)
{
    auto it = b.begin();
    for (const auto &x : a) {
        while (it != b.end() && it->var < x.var)
            ++it;
        if (it == b.end() || it->var != x.var || it->value != x.value)
            return false;
    }
    return true;
}

void sort_by_var(std::vector<Binding> &bindings)
{
    std::sort(bindings.begin(), bindings.end(), [](const Binding &a, const Binding &b) { return a.var < b.var; });
}

} // namespace

std::string MonitorReport::to_json() const
{
    nlohmann::ordered_json j;
    j["events"] = events;
    j["nogoods_added"] = nogoods.size();
    j["excluded_final"] = excluded_final;
    j["violations"] = violations;
    return j.dump(2) + "\n";
}

Monitor::Monitor(const Problem &problem, Algorithm algorithm)
    : problem_(problem), algorithm_(algorithm), traits_(traits_of(algorithm))
{
    const auto total = problem.search_space();
    if (total > oracle_guard)
        throw InputError("search space " + std::to_string(total) + " exceeds the monitor guard of " +
                         std::to_string(oracle_guard));
    report_.total_assignments = total;
    stride_.assign(problem.num_variables(), 1);
    for (auto v = static_cast<int>(problem.num_variables()) - 2; v >= 0; --v)
        stride_[v] = stride_[v + 1] * problem.domain_size(v + 1);
    excluded_.resize(total);
    live_.resize(problem.num_variables());
    for (VarIndex v = 0; v < static_cast<VarIndex>(problem.num_variables()); ++v)
        live_[v].resize(problem.domain_size(v));
}

Bitset Monitor::region(const std::vector<Binding> &cube) const
{
    Bitset out(excluded_.size());
    if (out.empty())
        return out;
    std::vector<bool> fixed(problem_.num_variables(), false);
    std::uint64_t base = 0;
    for (const auto &b : cube) {
        fixed[b.var] = true;
        base += static_cast<std::uint64_t>(b.value) * stride_[b.var];
    }
    std::vector<VarIndex> free;
    for (VarIndex v = 0; v < static_cast<VarIndex>(fixed.size()); ++v)
        if (!fixed[v])
            free.push_back(v);
    std::vector<std::size_t> digit(free.size(), 0);
    while (true) {
        std::uint64_t index = base;
        for (std::size_t k = 0; k < free.size(); ++k)
            index += digit[k] * stride_[free[k]];
        out.set(index);
        std::size_t k = free.size();
        while (k > 0) {
            --k;
            if (++digit[k] < problem_.domain_size(free[k]))
                break;
            digit[k] = 0;
            if (k == 0)
                return out;
        }
        if (free.empty())
            return out;
    }
}

std::string Monitor::describe(const std::vector<Binding> &bindings) const
{
    std::string out = "{";
    for (const auto &b : bindings)
        out += (out.size() > 1 ? "," : "") + problem_.name(b.var) + "=" + problem_.value_name(b.var, b.value);
    return out + "}";
}

void Monitor::violation(std::size_t event, const std::string &check, const std::string &detail)
{
    report_.violations.push_back("event " + std::to_string(event) + ": " + check + ": " + detail);
}

void Monitor::record(const Event &e, const EngineView &view, std::vector<Binding> context)
{
    Live live;
    for (auto c : e.culprits) {
        if (!view.partial.is_bound(c)) {
            violation(view.event_index, "liveness", "new explanation cites unbound " + problem_.name(c));
            continue;
        }
        live.antecedent.push_back({c, view.partial.value_of(c)});
    }
    for (const auto &b : live.antecedent)
        if (std::none_of(context.begin(), context.end(), [&](const Binding &x) { return x == b; }))
            context.push_back(b);
    sort_by_var(context);

    live.cube = context;
    live.cube.push_back({e.var, e.value});
    sort_by_var(live.cube);

    Nogood n;
    n.event = view.event_index;
    n.var = e.var;
    n.value = e.value;
    n.antecedent = live.antecedent;
    n.context = context;
    n.replacement = e.replaced;
    n.fresh = std::none_of(cubes_.begin(), cubes_.end(), [&](const auto &c) { return sub_cube(c, live.cube); });
    if (traits_.merge_on_select && !n.fresh && !n.replacement)
        violation(view.event_index, "claim-2",
                  problem_.name(e.var) + "!=" + problem_.value_name(e.var, e.value) + " under " + describe(context) +
                      " already follows from earlier nogoods");

    excluded_ |= region(live.cube);
    n.excluded_after = excluded_.count();
    report_.excluded_final = n.excluded_after;

    live.nogood = report_.nogoods.size();
    report_.nogoods.push_back(std::move(n));
    cubes_.push_back(live.cube);
    live_[e.var][e.value] = live;
    if (e.kind == EventKind::backjump)
        step_new_ = live;
}

void Monitor::on_event(const Event &e, const EngineView &view)
{
    report_.events = view.event_index + 1;
    const auto &partial = view.partial;

    switch (e.kind) {
    case EventKind::assign: {
        step_new_.reset();
        report_.assigned_states.emplace_back(partial.bindings().begin(), partial.bindings().end());
        for (const auto &row : live_)
            for (const auto &entry : row)
                if (entry && holds_in(entry->cube, partial))
                    violation(view.event_index, "claim-1",
                              "bindings violate the live nogood " + describe(entry->cube));
        break;
    }
    case EventKind::eliminate: {
        std::vector<Binding> context(partial.bindings().begin(), partial.bindings().end());
        record(e, view, std::move(context));
        break;
    }
    case EventKind::backjump: {
        const auto bindings = partial.bindings();
        std::vector<Binding> context(bindings.begin(), bindings.begin() + std::min<std::size_t>(e.position, bindings.size()));
        record(e, view, std::move(context));
        break;
    }
    case EventKind::prune: {
        auto &slot = live_[e.var][e.value];
        if (!slot) {
            violation(view.event_index, "bookkeeping", "prune of an unrecorded explanation");
            break;
        }
        if (traits_.merge_on_select && step_new_) {
            const auto &dropped = *slot;
            const auto &added = *step_new_;
            const auto &dropped_context = report_.nogoods[dropped.nogood].context;
            for (const auto &b : added.cube)
                if (std::none_of(dropped_context.begin(), dropped_context.end(),
                                 [&](const Binding &x) { return x.var == b.var; })) {
                    violation(view.event_index, "lemma-a1",
                              "dropped nogood " + describe(dropped.cube) + " has no " + problem_.name(b.var) +
                                  " in its context while its replacement " + describe(added.cube) + " does");
                    break;
                }
            if (!region(dropped.cube).is_subset_of(region(added.cube)))
                violation(view.event_index, "monotonicity",
                          "dropping " + describe(dropped.cube) + " loses assignments not excluded by " +
                              describe(added.cube));
        }
        slot.reset();
        break;
    }
    case EventKind::reset:
        for (auto &entry : live_[e.var])
            entry.reset();
        break;
    case EventKind::dead_end: step_new_.reset(); break;
    case EventKind::fail:
    case EventKind::solve:
    case EventKind::exhausted: break;
    }

    if (e.kind == EventKind::backjump || e.kind == EventKind::prune)
        return;
    for (VarIndex v = 0; v < static_cast<VarIndex>(live_.size()); ++v) {
        if (!traits_.merge_on_select && !partial.is_bound(v))
            continue;
        for (const auto &entry : live_[v])
            if (entry && !holds_in(entry->antecedent, partial))
                violation(view.event_index, "liveness",
                          "explanation for " + problem_.name(v) + " rests on " + describe(entry->antecedent) +
                              " which no longer holds");
    }
}

MonitorReport monitor_run(const Problem &problem, Algorithm algorithm, const Mechanism &mechanism,
                          const Heuristics &heuristics, const Limits &limits, SearchOutcome *outcome)
{
    Monitor monitor(problem, algorithm);
    SolveOptions options;
    options.observer = &monitor;
    auto result = solve(problem, algorithm, mechanism, heuristics, limits, options);
    auto report = monitor.report();
    report.excluded_final = report.nogoods.empty() ? 0 : report.nogoods.back().excluded_after;
    if (outcome)
        *outcome = std::move(result);
    return report;
}

} // namespace dynabt
