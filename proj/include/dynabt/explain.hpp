#pragma once

#include <dynabt/problem.hpp>

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace dynabt {

/// `value` cannot be taken because of the current values of `culprits`.
struct Explanation {
    ValueIndex value = npos;
    VarSet culprits;

    friend bool operator==(const Explanation &, const Explanation &) = default;
};

using Explanations = std::vector<Explanation>;

/// An elimination mechanism: explanations for the unassigned variable `i`
/// given the partial solution. Pure; safe to call concurrently.
using Mechanism = std::function<Explanations(const Problem &, const PartialSolution &, VarIndex i)>;

enum class MechanismKind { basic, forward, blame_everything };

std::optional<MechanismKind> parse_mechanism(std::string_view name);
std::string_view to_string(MechanismKind kind);
Mechanism make_mechanism(MechanismKind kind);

/// One explanation per value that violates a completed constraint; the
/// culprits are the other variables of the first such constraint.
Explanations eliminate_basic(const Problem &problem, const PartialSolution &partial, VarIndex i);

/// Basic elimination plus forward checking: `v` is also eliminated when some
/// unassigned k would be left without a consistent value. The culprits are
/// the assigned variables of the constraints that kill each of k's values.
Explanations eliminate_forward(const Problem &problem, const PartialSolution &partial, VarIndex i);

/// Basic elimination but blaming every assigned variable. Correct and
/// complete, and turns every jump into a chronological backtrack.
Explanations eliminate_blame_everything(const Problem &problem, const PartialSolution &partial, VarIndex i);

enum class MergeResult { inserted, replaced, kept };

/// The eliminating explanations held for one variable, at most one per value.
class EliminationSet {
public:
    EliminationSet() = default;
    EliminationSet(VarIndex owner, std::size_t domain_size) : owner_(owner), entries_(domain_size) {}

    VarIndex owner() const { return owner_; }
    std::size_t domain_size() const { return entries_.size(); }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    /// Every value eliminated.
    bool exhausted() const { return count_ == entries_.size(); }

    bool contains(ValueIndex v) const { return entries_[v].has_value(); }
    const VarSet &culprits(ValueIndex v) const { return *entries_[v]; }

    /// Conciseness-preserving insert: a second explanation for a value only
    /// replaces the first when its culprit set is a strict subset. A smaller
    /// but unrelated set could be retracted sooner and let search cycle.
    MergeResult offer(const Explanation &e);
    void set(ValueIndex v, VarSet culprits);
    bool erase(ValueIndex v);
    void clear();

    /// Total culprit-list length.
    std::size_t storage() const;
    /// Entries in value order.
    Explanations entries() const;

    friend bool operator==(const EliminationSet &, const EliminationSet &) = default;

private:
    VarIndex owner_ = npos;
    std::vector<std::optional<VarSet>> entries_;
    std::size_t count_ = 0;
};

using EliminationSets = std::vector<EliminationSet>;

/// One empty set per variable of `problem`.
EliminationSets make_elimination_sets(const Problem &problem);

EliminationSet merge(EliminationSet existing, const Explanations &fresh);
std::vector<ValueIndex> eliminated_values(const EliminationSet &e);
/// Every variable appearing in any explanation of `e`.
VarSet culprit_union(const EliminationSet &e);

struct Removal {
    VarIndex var = npos;
    ValueIndex value = npos;
    VarSet culprits;
};

/// Drop every explanation, in every set, whose culprits mention `j`.
/// Removals are reported in (variable, value) order.
std::vector<Removal> prune_involving(EliminationSets &sets, VarIndex j);

} // namespace dynabt
