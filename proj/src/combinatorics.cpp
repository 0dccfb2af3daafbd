#include "slatefree/combinatorics.hpp"

#include <stdexcept>

namespace slatefree {

std::uint64_t count_slates(int n, int k) {
    if (n < 0 || k < 0 || k > n) throw std::invalid_argument("count_slates: need 0 <= k <= n");
    if (k > n - k) k = n - k;
    using u128 = unsigned __int128;
    u128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("count_slates: result exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

// Items available at a state, ascending: [0, k) without `excluded`.
// reduced index x in [0, k-1) <-> item id.
inline int to_item(int x, int excluded) { return x < excluded ? x : x + 1; }
inline int to_reduced(int id, int excluded) { return id < excluded ? id : id - 1; }

inline std::uint64_t binom0(int n, int k) {
    return (k < 0 || n < 0 || k > n) ? 0 : count_slates(n, k);
}

} // namespace

std::vector<Slate> enumerate_slates(int k, int excluded, int n) {
    if (n < 1 || n > k - 1) throw std::invalid_argument("enumerate_slates: need 1 <= n <= k-1");
    if (excluded < 0 || excluded >= k) throw std::invalid_argument("enumerate_slates: excluded out of range");
    const int m = k - 1;
    std::vector<Slate> out;
    out.reserve(static_cast<std::size_t>(count_slates(m, n)));
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (;;) {
        std::vector<int> items(n);
        for (int i = 0; i < n; ++i) items[i] = to_item(idx[i], excluded);
        out.push_back(Slate{std::move(items)});
        int i = n - 1;
        while (i >= 0 && idx[i] == m - n + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::uint64_t rank_slate(const Slate& slate, int k, int excluded) {
    const int n = slate.size();
    if (n < 1 || n > k - 1) throw std::invalid_argument("rank_slate: bad slate size");
    const int m = k - 1;
    std::uint64_t rank = 0;
    int prev = -1;
    for (int i = 0; i < n; ++i) {
        const int id = slate.items[i];
        if (id < 0 || id >= k || id == excluded) throw std::invalid_argument("rank_slate: invalid item id");
        const int x = to_reduced(id, excluded);
        if (x <= prev) throw std::invalid_argument("rank_slate: items not strictly increasing");
        // slates that chose a smaller element at position i
        for (int y = prev + 1; y < x; ++y) rank += binom0(m - 1 - y, n - 1 - i);
        prev = x;
    }
    return rank;
}

Slate unrank_slate(std::uint64_t rank, int k, int excluded, int n) {
    if (n < 1 || n > k - 1) throw std::invalid_argument("unrank_slate: bad slate size");
    const int m = k - 1;
    if (rank >= count_slates(m, n)) throw std::out_of_range("unrank_slate: rank out of range");
    std::vector<int> items(n);
    int x = 0;
    for (int i = 0; i < n; ++i) {
        for (;; ++x) {
            const std::uint64_t block = binom0(m - 1 - x, n - 1 - i);
            if (rank < block) break;
            rank -= block;
        }
        items[i] = to_item(x, excluded);
        ++x;
    }
    return Slate{std::move(items)};
}

Slate random_slate(int k, int excluded, int n, Rng& rng) {
    return unrank_slate(rng.uniform_u64(count_slates(k - 1, n)), k, excluded, n);
}

} // namespace slatefree
