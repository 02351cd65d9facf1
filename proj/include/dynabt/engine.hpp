#pragma once

#include <dynabt/explain.hpp>
#include <dynabt/trace.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace dynabt {

enum class VariableRule { lexicographic, cheapest_first };
enum class ValueRule { lexicographic, seeded_random };

std::optional<VariableRule> parse_variable_rule(std::string_view name);
std::optional<ValueRule> parse_value_rule(std::string_view name);
std::string_view to_string(VariableRule rule);
std::string_view to_string(ValueRule rule);

struct Heuristics {
    VariableRule variable_rule = VariableRule::lexicographic;
    ValueRule value_rule = ValueRule::lexicographic;
    std::uint64_t seed = 0;
    /// Values tried first, in the given order, for the listed variables.
    /// Remaining values follow the value rule.
    std::map<VarIndex, std::vector<ValueIndex>> preferences;
};

struct Limits {
    std::optional<std::uint64_t> max_backtracks;
    std::optional<std::uint64_t> max_nodes;
};

struct SearchStats {
    std::uint64_t nodes_expanded = 0;
    /// Bindings removed by backtracking; a suffix pop of length n counts n.
    std::uint64_t backtracks = 0;
    /// Peak number of explanations held across all elimination sets.
    std::uint64_t max_elimination_entries = 0;
    /// Peak total culprit-list length across all elimination sets.
    std::uint64_t max_elimination_storage = 0;
};

enum class Verdict { solved, unsat, exhausted };

std::string_view to_string(Verdict verdict);

struct SearchOutcome {
    Verdict verdict = Verdict::exhausted;
    std::optional<Assignment> solution;
    SearchStats stats;
    SearchTrace trace;
    /// Bindings and elimination sets when the run stopped.
    PartialSolution final_partial;
    EliminationSets final_sets;
};

/// Read-only view of a running engine, handed to observers after each event.
struct EngineView {
    const Problem &problem;
    Algorithm algorithm;
    const PartialSolution &partial;
    const EliminationSets &sets;
    std::size_t event_index;
};

class SearchObserver {
public:
    virtual ~SearchObserver() = default;
    /// Called after the state change the event describes has been applied.
    virtual void on_event(const Event &event, const EngineView &view) = 0;
};

struct SolveOptions {
    SearchObserver *observer = nullptr;
    bool record_trace = true;
    /// Assert the engine invariants after every event (culprit liveness for
    /// the dynamic variants, dead-end precondition, soundness). Violations
    /// throw std::logic_error.
    bool check_invariants = false;
};

/// Run one of the search procedures. The problem must be well formed.
/// oldest_culprit requires a finite node limit.
SearchOutcome solve(const Problem &problem, Algorithm algorithm, const Mechanism &mechanism,
                    const Heuristics &heuristics, const Limits &limits, const SolveOptions &options = {});

SearchOutcome solve_dfs(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                        const SolveOptions & = {});
SearchOutcome solve_explained_dfs(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                                  const SolveOptions & = {});
SearchOutcome solve_backjump(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                             const SolveOptions & = {});
SearchOutcome solve_dynamic_v1(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                               const SolveOptions & = {});
SearchOutcome solve_dynamic(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                            const SolveOptions & = {});
SearchOutcome solve_oldest_culprit(const Problem &, const Mechanism &, const Heuristics &, const Limits &,
                                   const SolveOptions & = {});

/// Pick the next variable to instantiate. `sets` should hold, for every
/// unassigned variable, the elimination set step 2 would give it now.
/// Cheapest-first minimises |V_i - E_i|; ties go to declaration order.
VarIndex next_variable(const Heuristics &heuristics, const Problem &problem, const PartialSolution &partial,
                       const EliminationSets &sets);

} // namespace dynabt
