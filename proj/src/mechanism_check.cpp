#include <dynabt/verify.hpp>

#include <functional>
#include <random>
#include <set>

namespace dynabt {

namespace {

class Checker {
public:
    Checker(const Mechanism &mechanism, const Problem &problem)
        : mechanism_(mechanism), problem_(problem), oracle_(problem), solutions_(oracle_.solutions())
    {
    }

    // False once a counterexample has been found.
    bool check(const std::vector<Binding> &p, VarIndex i)
    {
        ++report.cases;
        PartialSolution partial(problem_.num_variables());
        for (const auto &b : p)
            partial.bind(b.var, b.value);
        const auto fresh = mechanism_(problem_, partial, i);

        std::set<ValueIndex> eliminated;
        for (const auto &e : fresh) {
            if (e.value < 0 || e.value >= static_cast<ValueIndex>(problem_.domain_size(i)))
                return fail("conciseness", p, i, "explanation for a value outside the domain");
            if (!eliminated.insert(e.value).second)
                return fail("conciseness", p, i, "two explanations for " + problem_.value_name(i, e.value));
            for (auto c : e.culprits)
                if (c == i || !partial.is_bound(c))
                    return fail("conciseness", p, i,
                                "culprit " + problem_.name(c) + " of " + problem_.value_name(i, e.value) +
                                    " is not an assigned variable");
        }

        for (ValueIndex v = 0; v < static_cast<ValueIndex>(problem_.domain_size(i)); ++v) {
            auto extended = p;
            extended.push_back({i, v});
            if (!eliminated.contains(v) && !oracle_.consistent(extended))
                return fail("correctness", p, i,
                            problem_.value_name(i, v) + " is kept but violates a completed constraint");
            if (eliminated.contains(v) && extends(extended))
                return fail("lemma", p, i,
                            problem_.value_name(i, v) + " is eliminated but the bindings extend to a solution with it");
        }

        for (const auto &e : fresh) {
            std::vector<Binding> kept;
            for (const auto &b : p)
                if (e.culprits.contains(b.var))
                    kept.push_back(b);
            kept.push_back({i, e.value});
            if (extends(kept))
                return fail("completeness", p, i,
                            problem_.value_name(i, e.value) + " is blamed on " + names(e.culprits) +
                                " but those bindings extend to a solution with it");
        }
        return true;
    }

    MechanismReport report;

private:
    bool extends(const std::vector<Binding> &fixed) const
    {
        for (const auto &s : solutions_) {
            bool ok = true;
            for (const auto &b : fixed)
                if (s[b.var] != b.value) {
                    ok = false;
                    break;
                }
            if (ok)
                return true;
        }
        return false;
    }

    std::string names(const VarSet &vars) const
    {
        std::string out = "{";
        for (auto v : vars)
            out += (out.size() > 1 ? "," : "") + problem_.name(v);
        return out + "}";
    }

    bool fail(const char *property, const std::vector<Binding> &p, VarIndex i, const std::string &why)
    {
        report.passed = false;
        report.property = property;
        std::string ps = "<";
        for (const auto &b : p)
            ps += (ps.size() > 1 ? ", " : "") + problem_.name(b.var) + "=" + problem_.value_name(b.var, b.value);
        report.counterexample = "P = " + ps + ">, i = " + problem_.name(i) + ": " + why;
        return false;
    }

public:
    const Oracle &oracle() const { return oracle_; }

private:
    const Mechanism &mechanism_;
    const Problem &problem_;
    Oracle oracle_;
    std::vector<Assignment> solutions_;
};

} // namespace

MechanismReport check_mechanism(const Mechanism &mechanism, const Problem &problem,
                                const MechanismCheckOptions &options)
{
    problem.require_well_formed();
    Checker checker(mechanism, problem);
    const auto n = static_cast<VarIndex>(problem.num_variables());
    std::vector<Binding> p;
    std::vector<bool> bound(n, false);

    auto check_all = [&]() {
        for (VarIndex i = 0; i < n; ++i)
            if (!bound[i] && !checker.check(p, i))
                return false;
        return true;
    };

    if (problem.num_variables() <= options.exhaustive_vars) {
        std::function<bool()> walk = [&]() -> bool {
            if (!check_all())
                return false;
            for (VarIndex u = 0; u < n; ++u) {
                if (bound[u])
                    continue;
                for (ValueIndex x = 0; x < static_cast<ValueIndex>(problem.domain_size(u)); ++x) {
                    p.push_back({u, x});
                    if (checker.oracle().consistent(p)) {
                        bound[u] = true;
                        const bool ok = walk();
                        bound[u] = false;
                        if (!ok)
                            return false;
                    }
                    p.pop_back();
                }
            }
            return true;
        };
        walk();
        return checker.report;
    }

    std::mt19937_64 rng(options.seed);
    std::vector<VarIndex> order(n);
    for (std::size_t s = 0; s < options.sampled_orders; ++s) {
        for (VarIndex v = 0; v < n; ++v)
            order[v] = v;
        for (std::size_t k = order.size(); k > 1; --k)
            std::swap(order[k - 1], order[rng() % k]);
        std::size_t budget = 20000;
        std::function<bool(std::size_t)> walk = [&](std::size_t depth) -> bool {
            if (budget == 0)
                return true;
            --budget;
            if (!check_all())
                return false;
            if (depth == order.size())
                return true;
            const auto u = order[depth];
            for (ValueIndex x = 0; x < static_cast<ValueIndex>(problem.domain_size(u)); ++x) {
                p.push_back({u, x});
                if (checker.oracle().consistent(p)) {
                    bound[u] = true;
                    const bool ok = walk(depth + 1);
                    bound[u] = false;
                    if (!ok)
                        return false;
                }
                p.pop_back();
            }
            return true;
        };
        if (!walk(0))
            break;
    }
    return checker.report;
}

} // namespace dynabt
