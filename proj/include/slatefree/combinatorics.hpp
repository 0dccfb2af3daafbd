#ifndef SLATEFREE_COMBINATORICS_HPP
#define SLATEFREE_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "slatefree/rng.hpp"
#include "slatefree/slate.hpp"

namespace slatefree {

// Exact binomial coefficient C(n, k). Throws std::overflow_error if the
// value does not fit in 64 bits.
std::uint64_t count_slates(int n, int k);

// All C(k-1, n) slates over [0, k) \ {excluded}, lexicographic in the
// sorted item sequence.
std::vector<Slate> enumerate_slates(int k, int excluded, int n);

// Combinatorial-number-system bijection consistent with enumerate_slates
// order. Ranks live in [0, C(k-1, n)).
std::uint64_t rank_slate(const Slate& slate, int k, int excluded);
Slate unrank_slate(std::uint64_t rank, int k, int excluded, int n);

// Uniform draw over all C(k-1, n) slates: one rank draw, then unrank.
Slate random_slate(int k, int excluded, int n, Rng& rng);

} // namespace slatefree

#endif
