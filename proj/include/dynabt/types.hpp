#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynabt {

/// Position of a variable in Problem::variables().
using VarIndex = int;
/// Position of a value in its variable's domain.
using ValueIndex = int;

inline constexpr int npos = -1;

struct Binding {
    VarIndex var = npos;
    ValueIndex value = npos;

    friend bool operator==(const Binding &, const Binding &) = default;
};

/// Malformed input data: bad files, invalid problems, unusable parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sorted, duplicate-free set of variable indices. Culprit sets are small
/// (bounded by the number of variables) so a flat vector beats a tree.
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<VarIndex> vars) : items_(vars) { normalise(); }
    explicit VarSet(std::vector<VarIndex> vars) : items_(std::move(vars)) { normalise(); }

    void insert(VarIndex v)
    {
        auto it = std::lower_bound(items_.begin(), items_.end(), v);
        if (it == items_.end() || *it != v)
            items_.insert(it, v);
    }

    bool erase(VarIndex v)
    {
        auto it = std::lower_bound(items_.begin(), items_.end(), v);
        if (it == items_.end() || *it != v)
            return false;
        items_.erase(it);
        return true;
    }

    bool contains(VarIndex v) const { return std::binary_search(items_.begin(), items_.end(), v); }

    void merge(const VarSet &other)
    {
        std::vector<VarIndex> out;
        out.reserve(items_.size() + other.items_.size());
        std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                       std::back_inserter(out));
        items_ = std::move(out);
    }

    bool subset_of(const VarSet &other) const
    {
        return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<VarIndex> &items() const { return items_; }

    friend bool operator==(const VarSet &, const VarSet &) = default;

private:
    void normalise()
    {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<VarIndex> items_;
};

} // namespace dynabt
