#pragma once

#include <dynabt/problem.hpp>

#include <string>
#include <utility>
#include <vector>

namespace dynabt::test {

using Named = std::vector<std::pair<std::string, std::string>>;

inline VarIndex var(const Problem &p, const std::string &name)
{
    return *p.find_variable(name);
}

inline ValueIndex val(const Problem &p, const std::string &name, const std::string &value)
{
    return *p.find_value(var(p, name), value);
}

/// Bindings in the given order.
inline PartialSolution partial(const Problem &p, const Named &bindings)
{
    PartialSolution out(p.num_variables());
    for (const auto &[n, v] : bindings)
        out.bind(var(p, n), val(p, n, v));
    return out;
}

/// Every variable must be named.
inline Assignment assignment(const Problem &p, const Named &bindings)
{
    Assignment a(p.num_variables(), npos);
    for (const auto &[n, v] : bindings)
        a[var(p, n)] = val(p, n, v);
    return a;
}

inline VarSet vars(const Problem &p, const std::vector<std::string> &names)
{
    VarSet out;
    for (const auto &n : names)
        out.insert(var(p, n));
    return out;
}

} // namespace dynabt::test
