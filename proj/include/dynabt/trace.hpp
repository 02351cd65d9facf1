#pragma once

#include <dynabt/explain.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace dynabt {

enum class Algorithm { dfs, explained_dfs, backjump, dynamic_v1, dynamic, oldest_culprit };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

/// The four switches that distinguish the search procedures.
struct StrategyTraits {
    bool values_only;        ///< E_i holds values without culprits
    bool merge_on_select;    ///< step 2 merges into E_i instead of resetting it
    bool pop_suffix;         ///< a backtrack also removes every later binding
    bool reselect_target;    ///< after a backtrack, continue with the target variable
    bool chronological;      ///< backtrack to the last binding regardless of culprits
    bool oldest_culprit;     ///< pick the earliest culprit binding instead of the latest
    bool refresh_target;     ///< merge a fresh epsilon(P, j) into E_j after backtracking
};

StrategyTraits traits_of(Algorithm algorithm);

enum class EventKind { assign, eliminate, reset, dead_end, backjump, prune, fail, solve, exhausted };

struct Event {
    EventKind kind = EventKind::fail;
    VarIndex var = npos;
    ValueIndex value = npos;
    /// eliminate: the stored explanation; dead_end: the culprit union;
    /// backjump: the explanation added for (var, value); prune: the removed one.
    VarSet culprits;
    /// prune: the variable whose unbinding invalidated the explanation.
    VarIndex cause = npos;
    /// backjump: position of the target binding before it was removed.
    int position = npos;
    /// eliminate: an existing explanation for the value was superseded.
    bool replaced = false;

    friend bool operator==(const Event &, const Event &) = default;
};

using SearchTrace = std::vector<Event>;

/// One tab-separated line, no terminator.
std::string format_event(const Problem &problem, const Event &event);
std::string format_trace(const Problem &problem, const SearchTrace &trace);
/// Inverse of format_trace. Fields the text format does not carry
/// (position, replaced) come back as defaults.
SearchTrace parse_trace(const Problem &problem, std::string_view text);

struct ReplayState {
    PartialSolution partial;
    EliminationSets sets;
};

/// Fold the trace into the bindings and elimination sets it describes.
ReplayState replay(const Problem &problem, Algorithm algorithm, const SearchTrace &trace);

/// Elimination table: rows are bound variables in partial-solution order,
/// then unbound ones in declaration order; one column per domain value
/// listing culprit names alphabetically.
std::string render_table(const Problem &problem, const PartialSolution &partial, const EliminationSets &sets);

/// A table after every dead end and after every completed backtrack step.
std::string render_tables(const Problem &problem, Algorithm algorithm, const SearchTrace &trace);

} // namespace dynabt
