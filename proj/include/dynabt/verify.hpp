#pragma once

#include <dynabt/engine.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dynabt {

/// Largest search space the oracle and monitor will enumerate.
inline constexpr std::uint64_t oracle_guard = 10'000'000;

/// Independent ground truth: restates the problem from its declarations
/// (names and strings only) and enumerates it depth first.
class Oracle {
public:
    explicit Oracle(const Problem &problem);
    ~Oracle();
    Oracle(Oracle &&) noexcept;

    /// Throws std::invalid_argument when `a` is not a total assignment.
    bool satisfies(const Assignment &a) const;
    /// Every constraint whose scope is fully bound holds.
    bool consistent(const std::vector<Binding> &bindings) const;
    /// Throws InputError above the guard.
    void require_within_guard() const;
    /// Does some solution agree with every binding? Stops at the first.
    bool extends(const std::vector<Binding> &fixed) const;
    /// Every solution, in odometer order over declaration order (the last
    /// variable varies fastest).
    std::vector<Assignment> solutions() const;
    std::optional<Assignment> first_solution() const;

private:
    struct Tables;
    std::unique_ptr<Tables> tables_;
};

bool oracle_satisfies(const Problem &problem, const Assignment &a);
/// Throws InputError above the guard.
std::vector<Assignment> brute_force(const Problem &problem);
std::optional<Assignment> oracle_first_solution(const Problem &problem);
bool oracle_extends(const Problem &problem, const std::vector<Binding> &fixed);

struct MechanismReport {
    bool passed = true;
    /// (partial solution, variable) pairs examined.
    std::uint64_t cases = 0;
    /// Empty on pass; otherwise one of correctness, completeness,
    /// conciseness, lemma.
    std::string property;
    std::string counterexample;
};

struct MechanismCheckOptions {
    /// Problems with at most this many variables get every variable order.
    std::size_t exhaustive_vars = 5;
    /// Random variable orders tried for larger problems.
    std::size_t sampled_orders = 20;
    std::uint64_t seed = 0;
};

/// Exercise `mechanism` on every ordered consistent partial solution (or a
/// sample of variable orders for larger problems) against the oracle.
MechanismReport check_mechanism(const Mechanism &mechanism, const Problem &problem,
                                const MechanismCheckOptions &options = {});

/// A recorded eliminating explanation with its extended antecedent.
struct Nogood {
    std::size_t event = 0;
    VarIndex var = npos;
    ValueIndex value = npos;
    std::vector<Binding> antecedent;
    /// Bindings preceding `var` when the explanation was made (for a fresh
    /// elimination, the whole partial solution), sorted by variable.
    std::vector<Binding> context;
    /// Total assignments ruled out by all nogoods so far, this one included.
    std::uint64_t excluded_after = 0;
    /// No earlier nogood's extended form subsumes this one.
    bool fresh = true;
    bool replacement = false;
};

struct MonitorReport {
    std::size_t events = 0;
    std::vector<Nogood> nogoods;
    std::uint64_t total_assignments = 0;
    std::uint64_t excluded_final = 0;
    /// "event N: <check>: <detail>"
    std::vector<std::string> violations;
    /// The bindings after each ASSIGN, in order.
    std::vector<std::vector<Binding>> assigned_states;

    bool certified() const { return violations.empty(); }
    /// {events, nogoods_added, excluded_final, violations}
    std::string to_json() const;
};

/// Observer that rebuilds the nogood set of a run and checks it after each
/// event. All checks apply to the merging engines (dynamic, dynamic-v1,
/// oldest-culprit); the resetting engines get liveness and claim 1 only.
class Monitor : public SearchObserver {
public:
    /// Throws InputError when the search space exceeds the guard.
    Monitor(const Problem &problem, Algorithm algorithm);

    void on_event(const Event &event, const EngineView &view) override;

    const MonitorReport &report() const { return report_; }

private:
    struct Live {
        std::vector<Binding> antecedent;
        std::vector<Binding> cube;
        std::size_t nogood = 0;
    };

    void record(const Event &event, const EngineView &view, std::vector<Binding> context);
    void violation(std::size_t event, const std::string &check, const std::string &detail);
    std::string describe(const std::vector<Binding> &bindings) const;
    Bitset region(const std::vector<Binding> &cube) const;

    const Problem &problem_;
    Algorithm algorithm_;
    StrategyTraits traits_;
    std::vector<std::uint64_t> stride_;
    Bitset excluded_;
    std::vector<std::vector<Binding>> cubes_;
    std::vector<std::vector<std::optional<Live>>> live_;
    std::optional<Live> step_new_;
    MonitorReport report_;
};

/// Solve with a Monitor attached; the outcome is returned through `outcome`
/// when given.
MonitorReport monitor_run(const Problem &problem, Algorithm algorithm, const Mechanism &mechanism,
                          const Heuristics &heuristics, const Limits &limits, SearchOutcome *outcome = nullptr);

} // namespace dynabt
