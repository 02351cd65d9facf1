#include <dynabt/problem.hpp>

#include <limits>
#include <set>
#include <sstream>

namespace dynabt {

namespace {

constexpr std::uint64_t dense_table_limit = std::uint64_t{1} << 24;

std::uint64_t encode(std::span<const std::uint64_t> radix, std::span<const ValueIndex> values)
{
    std::uint64_t code = 0;
    for (std::size_t k = 0; k < radix.size(); ++k)
        code = code * radix[k] + static_cast<std::uint64_t>(values[k]);
    return code;
}

} // namespace

bool CompiledConstraint::allows(std::span<const ValueIndex> values) const
{
    const auto code = encode(radix_, values);
    if (dense_)
        return table_[code];
    return sparse_.contains(code);
}

Problem::Problem(std::vector<VariableDecl> variables, std::vector<ConstraintDecl> constraints)
    : variables_(std::move(variables)), constraints_(std::move(constraints))
{
    value_index_.resize(variables_.size());
    incident_.resize(variables_.size());
    for (std::size_t v = 0; v < variables_.size(); ++v) {
        var_index_.emplace(variables_[v].name, static_cast<VarIndex>(v));
        for (std::size_t x = 0; x < variables_[v].domain.size(); ++x)
            value_index_[v].emplace(variables_[v].domain[x], static_cast<ValueIndex>(x));
    }

    compiled_.resize(constraints_.size());
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
        const auto &decl = constraints_[c];
        auto &out = compiled_[c];

        bool ok = !decl.scope.empty();
        std::set<VarIndex> seen;
        for (const auto &name : decl.scope) {
            auto v = find_variable(name);
            if (!v || !seen.insert(*v).second) {
                ok = false;
                break;
            }
            out.scope_.push_back(*v);
        }
        if (!ok || (decl.kind == RelationKind::neq && (decl.scope.size() != 2 || !decl.allowed.empty()))) {
            out.scope_.clear();
            continue;
        }

        std::uint64_t space = 1;
        for (auto v : out.scope_) {
            out.radix_.push_back(domain_size(v));
            if (domain_size(v) == 0 || space > dense_table_limit)
                space = dense_table_limit + 1;
            else
                space *= domain_size(v);
        }
        out.dense_ = space <= dense_table_limit;
        if (out.dense_)
            out.table_.assign(space, false);

        if (out.arity() == 2) {
            out.support_[0].assign(out.radix_[0], Bitset(out.radix_[1]));
            out.support_[1].assign(out.radix_[1], Bitset(out.radix_[0]));
        }
        auto mark = [&](std::span<const ValueIndex> tuple) {
            if (out.arity() == 2) {
                out.support_[0][tuple[0]].set(tuple[1]);
                out.support_[1][tuple[1]].set(tuple[0]);
            }
            auto code = encode(out.radix_, tuple);
            if (out.dense_)
                out.table_[code] = true;
            else
                out.sparse_.insert(code);
        };

        if (decl.kind == RelationKind::neq) {
            const auto a = out.scope_[0], b = out.scope_[1];
            for (ValueIndex x = 0; x < static_cast<ValueIndex>(domain_size(a)); ++x)
                for (ValueIndex y = 0; y < static_cast<ValueIndex>(domain_size(b)); ++y)
                    if (value_name(a, x) != value_name(b, y)) {
                        ValueIndex pair[2] = {x, y};
                        mark(pair);
                    }
        }
        else {
            std::vector<ValueIndex> tuple(out.scope_.size());
            for (const auto &row : decl.allowed) {
                if (row.size() != out.scope_.size()) {
                    ok = false;
                    break;
                }
                for (std::size_t k = 0; k < row.size() && ok; ++k) {
                    auto x = find_value(out.scope_[k], row[k]);
                    if (!x)
                        ok = false;
                    else
                        tuple[k] = *x;
                }
                if (!ok)
                    break;
                mark(tuple);
            }
        }
        if (!ok) {
            out = CompiledConstraint{};
            continue;
        }

        out.well_formed_ = true;
        for (auto v : out.scope_)
            incident_[v].push_back(c);
    }

    well_formed_ = validate_problem(*this).empty();
}

std::size_t Problem::max_domain_size() const
{
    std::size_t best = 0;
    for (const auto &v : variables_)
        best = std::max(best, v.domain.size());
    return best;
}

std::optional<VarIndex> Problem::find_variable(std::string_view name) const
{
    auto it = var_index_.find(name);
    if (it == var_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<ValueIndex> Problem::find_value(VarIndex v, std::string_view value) const
{
    const auto &index = value_index_[v];
    auto it = index.find(value);
    if (it == index.end())
        return std::nullopt;
    return it->second;
}

void Problem::require_well_formed() const
{
    if (well_formed_)
        return;
    std::ostringstream msg;
    msg << "invalid problem:";
    for (const auto &v : validate_problem(*this))
        msg << "\n  " << v;
    throw InputError(msg.str());
}

std::uint64_t Problem::search_space() const
{
    std::uint64_t total = 1;
    for (const auto &v : variables_) {
        const auto d = static_cast<std::uint64_t>(v.domain.size());
        if (d != 0 && total > std::numeric_limits<std::uint64_t>::max() / d)
            return std::numeric_limits<std::uint64_t>::max();
        total *= d;
    }
    return total;
}

std::vector<std::string> validate_problem(const Problem &problem)
{
    std::vector<std::string> out;
    std::set<std::string> names;
    for (const auto &var : problem.variables()) {
        if (!names.insert(var.name).second)
            out.push_back("duplicate variable name '" + var.name + "'");
        if (var.domain.empty())
            out.push_back("empty domain for variable '" + var.name + "'");
        std::set<std::string> values;
        for (const auto &x : var.domain)
            if (!values.insert(x).second)
                out.push_back("duplicate value '" + x + "' in domain of '" + var.name + "'");
    }

    for (std::size_t c = 0; c < problem.num_constraints(); ++c) {
        const auto &decl = problem.constraints()[c];
        const auto where = "constraint " + std::to_string(c) + ": ";
        if (decl.scope.empty()) {
            out.push_back(where + "empty scope");
            continue;
        }
        std::vector<std::optional<VarIndex>> scope;
        std::set<std::string> seen;
        bool resolved = true;
        for (const auto &name : decl.scope) {
            if (!seen.insert(name).second)
                out.push_back(where + "duplicate scope variable '" + name + "'");
            auto v = problem.find_variable(name);
            if (!v) {
                out.push_back(where + "unknown scope variable '" + name + "'");
                resolved = false;
            }
            scope.push_back(v);
        }

        if (decl.kind == RelationKind::neq) {
            if (decl.scope.size() != 2)
                out.push_back(where + "neq shorthand requires a scope of arity 2");
            if (!decl.allowed.empty())
                out.push_back(where + "neq shorthand cannot carry allowed tuples");
            continue;
        }

        for (std::size_t t = 0; t < decl.allowed.size(); ++t) {
            const auto &row = decl.allowed[t];
            if (row.size() != decl.scope.size()) {
                out.push_back(where + "tuple " + std::to_string(t) + " has arity " + std::to_string(row.size()) +
                              ", scope has " + std::to_string(decl.scope.size()));
                continue;
            }
            if (!resolved)
                continue;
            for (std::size_t k = 0; k < row.size(); ++k)
                if (!problem.find_value(*scope[k], row[k]))
                    out.push_back(where + "tuple out of domain: value '" + row[k] + "' not in domain of '" +
                                  decl.scope[k] + "'");
        }
    }
    return out;
}

bool is_solution(const Problem &problem, const Assignment &a)
{
    if (a.size() != problem.num_variables())
        throw std::invalid_argument("assignment does not cover every variable");
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a[v] < 0 || static_cast<std::size_t>(a[v]) >= problem.domain_size(static_cast<VarIndex>(v)))
            throw std::invalid_argument("assignment value out of domain for '" +
                                        problem.name(static_cast<VarIndex>(v)) + "'");

    std::vector<ValueIndex> tuple;
    for (std::size_t c = 0; c < problem.num_constraints(); ++c) {
        const auto &con = problem.constraint(c);
        tuple.clear();
        for (auto v : con.scope())
            tuple.push_back(a[v]);
        if (!con.allows(tuple))
            return false;
    }
    return true;
}

ConstraintDecl expand(const Problem &problem, const ConstraintDecl &c)
{
    if (c.kind != RelationKind::neq)
        return c;
    ConstraintDecl out{c.scope, RelationKind::allowed, {}};
    auto a = problem.find_variable(c.scope.at(0));
    auto b = problem.find_variable(c.scope.at(1));
    if (!a || !b)
        throw InputError("cannot expand constraint over unknown variables");
    for (const auto &x : problem.variables()[*a].domain)
        for (const auto &y : problem.variables()[*b].domain)
            if (x != y)
                out.allowed.push_back({x, y});
    return out;
}

void PartialSolution::bind(VarIndex var, ValueIndex value)
{
    if (value_[var] != npos)
        throw std::logic_error("variable bound twice");
    position_[var] = static_cast<int>(bindings_.size());
    value_[var] = value;
    bindings_.push_back({var, value});
}

Binding PartialSolution::unbind(VarIndex var)
{
    const auto pos = position_[var];
    if (pos == npos)
        throw std::logic_error("unbinding an unbound variable");
    const auto removed = bindings_[pos];
    bindings_.erase(bindings_.begin() + pos);
    for (std::size_t k = pos; k < bindings_.size(); ++k)
        position_[bindings_[k].var] = static_cast<int>(k);
    value_[var] = npos;
    position_[var] = npos;
    return removed;
}

std::vector<Binding> PartialSolution::truncate(std::size_t position)
{
    std::vector<Binding> removed;
    if (position >= bindings_.size())
        return removed;
    removed.assign(bindings_.begin() + static_cast<std::ptrdiff_t>(position), bindings_.end());
    bindings_.resize(position);
    for (const auto &b : removed) {
        value_[b.var] = npos;
        position_[b.var] = npos;
    }
    return removed;
}

VarSet PartialSolution::assigned() const
{
    std::vector<VarIndex> vars;
    vars.reserve(bindings_.size());
    for (const auto &b : bindings_)
        vars.push_back(b.var);
    return VarSet(std::move(vars));
}

std::vector<std::size_t> completed_constraints(const Problem &problem, const VarSet &assigned, VarIndex i)
{
    if (assigned.contains(i))
        throw std::invalid_argument("completed_constraints: variable is already assigned");
    std::vector<std::size_t> out;
    for (auto c : problem.constraints_on(i)) {
        const auto &scope = problem.constraint(c).scope();
        if (std::all_of(scope.begin(), scope.end(), [&](VarIndex v) { return v == i || assigned.contains(v); }))
            out.push_back(c);
    }
    return out;
}

std::optional<std::size_t> violates(const Problem &problem, const PartialSolution &partial, Binding extra)
{
    std::vector<ValueIndex> tuple;
    for (auto c : problem.constraints_on(extra.var)) {
        const auto &con = problem.constraint(c);
        tuple.clear();
        bool complete = true;
        for (auto v : con.scope()) {
            if (v == extra.var)
                tuple.push_back(extra.value);
            else if (partial.is_bound(v))
                tuple.push_back(partial.value_of(v));
            else {
                complete = false;
                break;
            }
        }
        if (complete && !con.allows(tuple))
            return c;
    }
    return std::nullopt;
}

} // namespace dynabt
