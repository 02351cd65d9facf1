#pragma once

#include <dynabt/types.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dynabt {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

struct VariableDecl {
    std::string name;
    std::vector<std::string> domain;

    friend bool operator==(const VariableDecl &, const VariableDecl &) = default;
};

enum class RelationKind {
    allowed, ///< explicit allowed-tuple list
    neq      ///< binary shorthand: the two scope variables take unequal values
};

/// A constraint as declared: names only, so that malformed input is still
/// representable and can be reported by validate_problem().
struct ConstraintDecl {
    std::vector<std::string> scope;
    RelationKind kind = RelationKind::allowed;
    std::vector<std::vector<std::string>> allowed;

    friend bool operator==(const ConstraintDecl &, const ConstraintDecl &) = default;
};

/// Index-level view of one constraint, built once when the Problem is
/// constructed. Only meaningful when the owning problem is well formed.
class CompiledConstraint {
public:
    const std::vector<VarIndex> &scope() const { return scope_; }
    std::size_t arity() const { return scope_.size(); }
    bool well_formed() const { return well_formed_; }

    /// Values are given in scope order.
    bool allows(std::span<const ValueIndex> values) const;

    /// Binary constraints only: partner values compatible with `value` for
    /// the scope variable at position `side` (0 or 1).
    const Bitset &support(int side, ValueIndex value) const { return support_[side][value]; }

private:
    friend class Problem;

    std::vector<VarIndex> scope_;
    std::vector<std::uint64_t> radix_;
    bool well_formed_ = false;
    bool dense_ = true;
    std::vector<bool> table_;
    std::unordered_set<std::uint64_t> sparse_;
    std::vector<Bitset> support_[2];
};

/// A constraint-satisfaction problem: variables with finite ordered domains
/// plus extensional constraints. Immutable once constructed.
class Problem {
public:
    Problem() = default;
    Problem(std::vector<VariableDecl> variables, std::vector<ConstraintDecl> constraints);

    const std::vector<VariableDecl> &variables() const { return variables_; }
    const std::vector<ConstraintDecl> &constraints() const { return constraints_; }

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::string &name(VarIndex v) const { return variables_[v].name; }
    std::size_t domain_size(VarIndex v) const { return variables_[v].domain.size(); }
    std::size_t max_domain_size() const;
    const std::string &value_name(VarIndex v, ValueIndex x) const { return variables_[v].domain[x]; }

    std::optional<VarIndex> find_variable(std::string_view name) const;
    std::optional<ValueIndex> find_value(VarIndex v, std::string_view value) const;

    const CompiledConstraint &constraint(std::size_t c) const { return compiled_[c]; }
    /// Constraints mentioning `v`, in declaration order.
    std::span<const std::size_t> constraints_on(VarIndex v) const { return incident_[v]; }

    /// True when validate_problem() reports nothing.
    bool well_formed() const { return well_formed_; }
    /// Throws InputError listing the violations unless well formed.
    void require_well_formed() const;

    /// Product of domain sizes, saturating at UINT64_MAX.
    std::uint64_t search_space() const;

    friend bool operator==(const Problem &a, const Problem &b)
    {
        return a.variables_ == b.variables_ && a.constraints_ == b.constraints_;
    }

private:
    std::vector<VariableDecl> variables_;
    std::vector<ConstraintDecl> constraints_;
    std::map<std::string, VarIndex, std::less<>> var_index_;
    std::vector<std::unordered_map<std::string, ValueIndex, StringHash, std::equal_to<>>> value_index_;
    std::vector<CompiledConstraint> compiled_;
    std::vector<std::vector<std::size_t>> incident_;
    bool well_formed_ = false;
};

/// Every invariant violation of the problem; empty means valid.
std::vector<std::string> validate_problem(const Problem &problem);

/// Total map variable -> value, indexed by VarIndex.
using Assignment = std::vector<ValueIndex>;

/// Throws std::invalid_argument when `a` is not a total assignment.
bool is_solution(const Problem &problem, const Assignment &a);

/// Expand the `neq` shorthand into its allowed-tuple list; allowed-kind
/// constraints are returned unchanged.
ConstraintDecl expand(const Problem &problem, const ConstraintDecl &c);

/// Ordered sequence of bindings; no variable appears twice.
class PartialSolution {
public:
    PartialSolution() = default;
    explicit PartialSolution(std::size_t num_variables)
        : value_(num_variables, npos), position_(num_variables, npos)
    {
    }

    /// Append (var, value). Throws std::logic_error when var is already bound.
    void bind(VarIndex var, ValueIndex value);
    /// Remove the binding of `var` wherever it sits; later bindings keep
    /// their relative order. Returns the removed binding.
    Binding unbind(VarIndex var);
    /// Remove every binding at position >= `position`, returned in order.
    std::vector<Binding> truncate(std::size_t position);

    bool is_bound(VarIndex v) const { return value_[v] != npos; }
    ValueIndex value_of(VarIndex v) const { return value_[v]; }
    /// npos when unbound.
    int position_of(VarIndex v) const { return position_[v]; }

    std::span<const Binding> bindings() const { return bindings_; }
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }
    std::size_t num_variables() const { return value_.size(); }
    bool complete() const { return bindings_.size() == value_.size(); }

    /// The assigned-variable set.
    VarSet assigned() const;
    /// Only valid when complete().
    Assignment to_assignment() const { return value_; }

    friend bool operator==(const PartialSolution &a, const PartialSolution &b)
    {
        return a.bindings_ == b.bindings_;
    }

private:
    std::vector<Binding> bindings_;
    std::vector<ValueIndex> value_;
    std::vector<int> position_;
};

/// Constraints that mention `i` and become fully instantiated once `i` is
/// added to `assigned`, in declaration order.
std::vector<std::size_t> completed_constraints(const Problem &problem, const VarSet &assigned, VarIndex i);

/// First completed constraint (declaration order) violated by `partial`
/// extended with `extra`, if any.
std::optional<std::size_t> violates(const Problem &problem, const PartialSolution &partial, Binding extra);

} // namespace dynabt
