#include <dynabt/trace.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dynabt {

std::optional<Algorithm> parse_algorithm(std::string_view name)
{
    if (name == "dfs")
        return Algorithm::dfs;
    if (name == "explained-dfs")
        return Algorithm::explained_dfs;
    if (name == "backjump")
        return Algorithm::backjump;
    if (name == "dynamic-v1")
        return Algorithm::dynamic_v1;
    if (name == "dynamic")
        return Algorithm::dynamic;
    if (name == "oldest-culprit")
        return Algorithm::oldest_culprit;
    return std::nullopt;
}

std::string_view to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::dfs: return "dfs";
    case Algorithm::explained_dfs: return "explained-dfs";
    case Algorithm::backjump: return "backjump";
    case Algorithm::dynamic_v1: return "dynamic-v1";
    case Algorithm::dynamic: return "dynamic";
    case Algorithm::oldest_culprit: return "oldest-culprit";
    }
    return "?";
}

StrategyTraits traits_of(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::dfs: return {true, false, false, true, true, false, false};
    case Algorithm::explained_dfs: return {false, false, false, true, true, false, false};
    case Algorithm::backjump: return {false, false, true, true, false, false, false};
    case Algorithm::dynamic_v1: return {false, true, false, true, false, false, true};
    case Algorithm::dynamic: return {false, true, false, false, false, false, false};
    case Algorithm::oldest_culprit: return {false, true, false, false, false, true, false};
    }
    throw std::invalid_argument("unknown algorithm");
}

namespace {

std::string join_names(const Problem &problem, const VarSet &vars)
{
    std::string out;
    for (auto v : vars) {
        if (!out.empty())
            out += ',';
        out += problem.name(v);
    }
    return out;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto end = text.find(sep, start);
        out.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos)
            return out;
        start = end + 1;
    }
}

} // namespace

std::string format_event(const Problem &problem, const Event &e)
{
    auto value = [&] { return problem.value_name(e.var, e.value); };
    switch (e.kind) {
    case EventKind::assign: return "ASSIGN\t" + problem.name(e.var) + '\t' + value();
    case EventKind::eliminate:
        return "ELIM\t" + problem.name(e.var) + '\t' + value() + '\t' + join_names(problem, e.culprits);
    case EventKind::reset: return "RESET\t" + problem.name(e.var);
    case EventKind::dead_end: return "DEADEND\t" + problem.name(e.var);
    case EventKind::backjump:
        return "BACKJUMP\t" + problem.name(e.var) + '\t' + value() + '\t' + join_names(problem, e.culprits);
    case EventKind::prune: return "PRUNE\t" + problem.name(e.var) + '\t' + value() + '\t' + problem.name(e.cause);
    case EventKind::fail: return "FAIL";
    case EventKind::solve: return "SOLVE";
    case EventKind::exhausted: return "EXHAUSTED";
    }
    return {};
}

std::string format_trace(const Problem &problem, const SearchTrace &trace)
{
    std::string out;
    for (const auto &e : trace) {
        out += format_event(problem, e);
        out += '\n';
    }
    return out;
}

SearchTrace parse_trace(const Problem &problem, std::string_view text)
{
    SearchTrace out;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty())
            continue;
        auto fields = split(line, '\t');
        auto fail = [&](const std::string &why) {
            return InputError("trace line " + std::to_string(line_no) + ": " + why);
        };
        auto var = [&](std::size_t k) {
            if (k >= fields.size())
                throw fail("missing field");
            auto v = problem.find_variable(fields[k]);
            if (!v)
                throw fail("unknown variable '" + std::string(fields[k]) + "'");
            return *v;
        };
        auto value = [&](VarIndex v, std::size_t k) {
            if (k >= fields.size())
                throw fail("missing field");
            auto x = problem.find_value(v, fields[k]);
            if (!x)
                throw fail("unknown value '" + std::string(fields[k]) + "'");
            return *x;
        };
        auto culprits = [&](std::size_t k) {
            VarSet out;
            if (k >= fields.size())
                throw fail("missing field");
            if (!fields[k].empty())
                for (auto name : split(fields[k], ',')) {
                    auto v = problem.find_variable(name);
                    if (!v)
                        throw fail("unknown variable '" + std::string(name) + "'");
                    out.insert(*v);
                }
            return out;
        };

        Event e;
        const auto tag = fields[0];
        if (tag == "ASSIGN") {
            e.kind = EventKind::assign;
            e.var = var(1);
            e.value = value(e.var, 2);
        }
        else if (tag == "ELIM" || tag == "BACKJUMP") {
            e.kind = tag == "ELIM" ? EventKind::eliminate : EventKind::backjump;
            e.var = var(1);
            e.value = value(e.var, 2);
            e.culprits = culprits(3);
        }
        else if (tag == "RESET" || tag == "DEADEND") {
            e.kind = tag == "RESET" ? EventKind::reset : EventKind::dead_end;
            e.var = var(1);
        }
        else if (tag == "PRUNE") {
            e.kind = EventKind::prune;
            e.var = var(1);
            e.value = value(e.var, 2);
            e.cause = var(3);
        }
        else if (tag == "FAIL")
            e.kind = EventKind::fail;
        else if (tag == "SOLVE")
            e.kind = EventKind::solve;
        else if (tag == "EXHAUSTED")
            e.kind = EventKind::exhausted;
        else
            throw fail("unknown event '" + std::string(tag) + "'");
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

void apply(ReplayState &state, const StrategyTraits &traits, const Event &e)
{
    switch (e.kind) {
    case EventKind::assign: state.partial.bind(e.var, e.value); break;
    case EventKind::eliminate: state.sets[e.var].set(e.value, e.culprits); break;
    case EventKind::reset: state.sets[e.var].clear(); break;
    case EventKind::backjump:
        if (traits.pop_suffix)
            state.partial.truncate(static_cast<std::size_t>(state.partial.position_of(e.var)));
        else
            state.partial.unbind(e.var);
        state.sets[e.var].set(e.value, e.culprits);
        break;
    case EventKind::prune: state.sets[e.var].erase(e.value); break;
    default: break;
    }
}

} // namespace

ReplayState replay(const Problem &problem, Algorithm algorithm, const SearchTrace &trace)
{
    ReplayState state{PartialSolution(problem.num_variables()), make_elimination_sets(problem)};
    const auto traits = traits_of(algorithm);
    for (const auto &e : trace)
        apply(state, traits, e);
    return state;
}

std::string render_table(const Problem &problem, const PartialSolution &partial, const EliminationSets &sets)
{
    std::vector<std::string> columns;
    for (const auto &var : problem.variables())
        for (const auto &x : var.domain)
            if (std::find(columns.begin(), columns.end(), x) == columns.end())
                columns.push_back(x);

    std::vector<VarIndex> rows;
    for (const auto &b : partial.bindings())
        rows.push_back(b.var);
    for (VarIndex v = 0; v < static_cast<VarIndex>(problem.num_variables()); ++v)
        if (!partial.is_bound(v))
            rows.push_back(v);

    std::ostringstream out;
    out << "variable\tvalue";
    for (const auto &c : columns)
        out << '\t' << c;
    out << '\n';
    for (auto v : rows) {
        out << problem.name(v) << '\t';
        if (partial.is_bound(v))
            out << problem.value_name(v, partial.value_of(v));
        for (const auto &c : columns) {
            out << '\t';
            auto x = problem.find_value(v, c);
            if (!x || !sets[v].contains(*x))
                continue;
            std::vector<std::string> names;
            for (auto u : sets[v].culprits(*x))
                names.push_back(problem.name(u));
            std::sort(names.begin(), names.end());
            for (std::size_t k = 0; k < names.size(); ++k)
                out << (k ? "," : "") << names[k];
        }
        out << '\n';
    }
    return out.str();
}

std::string render_tables(const Problem &problem, Algorithm algorithm, const SearchTrace &trace)
{
    ReplayState state{PartialSolution(problem.num_variables()), make_elimination_sets(problem)};
    const auto traits = traits_of(algorithm);
    std::string out;
    std::string pending;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto &e = trace[k];
        apply(state, traits, e);
        if (e.kind == EventKind::dead_end) {
            out += "# DEADEND " + problem.name(e.var) + '\n' + render_table(problem, state.partial, state.sets) + '\n';
            continue;
        }
        if (e.kind == EventKind::backjump)
            pending = "# BACKJUMP " + problem.name(e.var) + '\n';
        if (pending.empty())
            continue;
        // A backtrack step ends at the first event that is neither one of
        // its prunes nor (for the refreshing variant) its fresh eliminations.
        const bool more = k + 1 < trace.size() &&
                          (trace[k + 1].kind == EventKind::prune ||
                           (traits.refresh_target && trace[k + 1].kind == EventKind::eliminate));
        if (!more) {
            out += pending + render_table(problem, state.partial, state.sets) + '\n';
            pending.clear();
        }
    }
    return out;
}

} // namespace dynabt
