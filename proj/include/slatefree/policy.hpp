#ifndef SLATEFREE_POLICY_HPP
#define SLATEFREE_POLICY_HPP

#include <utility>
#include <vector>

#include "slatefree/rng.hpp"
#include "slatefree/slate.hpp"

namespace slatefree {

// A stationary randomized policy: per state, a finite distribution over
// slates from A(s). Support slates are canonical and never contain s.
struct RandomizedPolicy {
    int num_states = 0;
    int slate_size = 0;
    std::vector<std::vector<std::pair<Slate, double>>> support; // [state] -> (slate, prob)

    // Throws config_error on any violated invariant.
    void validate() const;

    const Slate& sample(int s, Rng& rng) const;

    static RandomizedPolicy deterministic(std::vector<Slate> slates);
};

// Test-policy generator: samples up to max_support distinct support slates
// per state with symmetric-Dirichlet(1) weights.
RandomizedPolicy random_test_policy(int k, int n, int max_support, Rng& rng);

// Uniform policy over all of A(s), for every state.
RandomizedPolicy uniform_policy(int k, int n);

} // namespace slatefree

#endif
