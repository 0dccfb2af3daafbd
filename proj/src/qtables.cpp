#include "slatefree/qtables.hpp"

namespace slatefree {

Slate greedy_slate(const ItemQTable& table, int s, int n) {
    const int k = table.size();
    std::vector<std::pair<double, int>> entries;
    entries.reserve(k - 1);
    for (int j = 0; j < k; ++j)
        if (j != s) entries.emplace_back(table.at(s, j), j);
    // (value, id) lexicographic order makes the tie-break deterministic
    std::partial_sort(entries.begin(), entries.begin() + n, entries.end());
    std::vector<int> items(n);
    for (int i = 0; i < n; ++i) items[i] = entries[i].second;
    return Slate{std::move(items)};
}

} // namespace slatefree
