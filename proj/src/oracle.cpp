#include <dynabt/verify.hpp>

#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace dynabt {

struct Oracle::Tables {
    struct Check {
        std::vector<std::size_t> scope;
        bool neq = false;
        std::set<std::vector<std::string>> allowed;
    };

    std::vector<std::vector<std::string>> domains;
    std::vector<Check> checks;
    // due[v]: checks whose last scope variable in declaration order is v.
    std::vector<std::vector<std::size_t>> due;

    explicit Tables(const Problem &problem)
    {
        std::map<std::string, std::size_t> index;
        for (const auto &v : problem.variables()) {
            index.emplace(v.name, domains.size());
            domains.push_back(v.domain);
        }
        due.resize(domains.size());
        for (const auto &decl : problem.constraints()) {
            Check c;
            std::size_t last = 0;
            for (const auto &name : decl.scope) {
                auto it = index.find(name);
                if (it == index.end())
                    throw InputError("constraint names unknown variable '" + name + "'");
                c.scope.push_back(it->second);
                last = std::max(last, it->second);
            }
            c.neq = decl.kind == RelationKind::neq;
            c.allowed.insert(decl.allowed.begin(), decl.allowed.end());
            due[last].push_back(checks.size());
            checks.push_back(std::move(c));
        }
    }

    bool holds(const Check &c, const std::vector<const std::string *> &values) const
    {
        if (c.neq)
            return *values[c.scope[0]] != *values[c.scope[1]];
        std::vector<std::string> tuple;
        for (auto v : c.scope)
            tuple.push_back(*values[v]);
        return c.allowed.contains(tuple);
    }

    void require_within_guard() const
    {
        std::uint64_t size = 1;
        bool saturated = false;
        for (const auto &d : domains) {
            if (d.empty())
                return;
            if (size > UINT64_MAX / d.size())
                saturated = true;
            size = saturated ? UINT64_MAX : size * d.size();
        }
        if (size > oracle_guard)
            throw InputError("search space of " + std::string(saturated ? "over " : "") + std::to_string(size) +
                             " assignments exceeds the oracle guard of " + std::to_string(oracle_guard));
    }

    // Depth-first enumeration in declaration order. `fixed[v]` pins a value.
    // `visit` returns false to stop.
    void enumerate(const std::vector<ValueIndex> &fixed, const std::function<bool(const Assignment &)> &visit) const
    {
        const std::size_t n = domains.size();
        Assignment a(n, npos);
        std::vector<const std::string *> values(n, nullptr);
        std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
            if (k == n)
                return visit(a);
            for (std::size_t x = 0; x < domains[k].size(); ++x) {
                if (fixed[k] != npos && fixed[k] != static_cast<ValueIndex>(x))
                    continue;
                a[k] = static_cast<ValueIndex>(x);
                values[k] = &domains[k][x];
                bool ok = true;
                for (auto c : due[k])
                    if (!holds(checks[c], values)) {
                        ok = false;
                        break;
                    }
                if (ok && !go(k + 1))
                    return false;
            }
            a[k] = npos;
            return true;
        };
        go(0);
    }
};

Oracle::Oracle(const Problem &problem) : tables_(std::make_unique<Tables>(problem)) {}
Oracle::~Oracle() = default;
Oracle::Oracle(Oracle &&) noexcept = default;

bool Oracle::satisfies(const Assignment &a) const
{
    const auto &t = *tables_;
    if (a.size() != t.domains.size())
        throw std::invalid_argument("assignment does not cover every variable");
    std::vector<const std::string *> values;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v] < 0 || static_cast<std::size_t>(a[v]) >= t.domains[v].size())
            throw std::invalid_argument("assignment value out of domain");
        values.push_back(&t.domains[v][a[v]]);
    }
    for (const auto &c : t.checks)
        if (!t.holds(c, values))
            return false;
    return true;
}

bool Oracle::consistent(const std::vector<Binding> &bindings) const
{
    const auto &t = *tables_;
    std::vector<const std::string *> values(t.domains.size(), nullptr);
    for (const auto &b : bindings)
        values[b.var] = &t.domains[b.var][b.value];
    for (const auto &c : t.checks) {
        bool bound = true;
        for (auto v : c.scope)
            bound = bound && values[v];
        if (bound && !t.holds(c, values))
            return false;
    }
    return true;
}

void Oracle::require_within_guard() const
{
    tables_->require_within_guard();
}

bool Oracle::extends(const std::vector<Binding> &fixed) const
{
    const auto &t = *tables_;
    std::vector<ValueIndex> pin(t.domains.size(), npos);
    for (const auto &b : fixed) {
        if (pin[b.var] != npos && pin[b.var] != b.value)
            return false;
        pin[b.var] = b.value;
    }
    bool found = false;
    t.enumerate(pin, [&](const Assignment &) {
        found = true;
        return false;
    });
    return found;
}

std::vector<Assignment> Oracle::solutions() const
{
    const auto &t = *tables_;
    t.require_within_guard();
    std::vector<Assignment> out;
    t.enumerate(std::vector<ValueIndex>(t.domains.size(), npos), [&](const Assignment &a) {
        out.push_back(a);
        return true;
    });
    return out;
}

std::optional<Assignment> Oracle::first_solution() const
{
    const auto &t = *tables_;
    t.require_within_guard();
    std::optional<Assignment> out;
    t.enumerate(std::vector<ValueIndex>(t.domains.size(), npos), [&](const Assignment &a) {
        out = a;
        return false;
    });
    return out;
}

bool oracle_satisfies(const Problem &problem, const Assignment &a)
{
    return Oracle(problem).satisfies(a);
}

std::vector<Assignment> brute_force(const Problem &problem)
{
    return Oracle(problem).solutions();
}

std::optional<Assignment> oracle_first_solution(const Problem &problem)
{
    return Oracle(problem).first_solution();
}

bool oracle_extends(const Problem &problem, const std::vector<Binding> &fixed)
{
    Oracle oracle(problem);
    oracle.require_within_guard();
    return oracle.extends(fixed);
}

} // namespace dynabt
