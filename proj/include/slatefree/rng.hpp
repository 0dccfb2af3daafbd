#ifndef SLATEFREE_RNG_HPP
#define SLATEFREE_RNG_HPP

#include <cstdint>
#include <string_view>

namespace slatefree {

// Self-contained splitmix64 generator. Same seed, same sequence, on every
// platform; the standard <random> distributions do not guarantee that.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n). Multiply-shift; bias is O(n/2^64).
    std::uint64_t uniform_u64(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
    }

    int uniform_int(int n) { return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(n))); }

private:
    std::uint64_t state_;
};

// Stable stream derivation: FNV-1a over the tag, mixed with the master seed.
// Used to give every experiment cell its own independent generator.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ull ^ master;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    // one splitmix round to decorrelate nearby tags
    h += 0x9E3779B97F4A7C15ull;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
    return h ^ (h >> 31);
}

} // namespace slatefree

#endif
