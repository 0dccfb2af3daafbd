#ifndef SLATEFREE_SLATE_HPP
#define SLATEFREE_SLATE_HPP

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace slatefree {

// An unordered set of distinct item ids. Canonical form is the ascending
// sorted sequence, so two slates with the same item set compare equal.
struct Slate {
    std::vector<int> items;

    Slate() = default;
    explicit Slate(std::vector<int> ids) : items(std::move(ids)) {
        std::sort(items.begin(), items.end());
    }
    Slate(std::initializer_list<int> ids) : Slate(std::vector<int>(ids)) {}

    int size() const { return static_cast<int>(items.size()); }

    bool contains(int j) const {
        return std::binary_search(items.begin(), items.end(), j);
    }

    bool operator==(const Slate&) const = default;
    auto operator<=>(const Slate&) const = default;
};

} // namespace slatefree

#endif
