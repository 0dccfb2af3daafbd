#include "slatefree/policy.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "slatefree/combinatorics.hpp"
#include "slatefree/errors.hpp"

namespace slatefree {

void RandomizedPolicy::validate() const {
    if (static_cast<int>(support.size()) != num_states)
        throw config_error("policy: support size != num_states");
    for (int s = 0; s < num_states; ++s) {
        double total = 0.0;
        std::set<Slate> seen;
        for (const auto& [slate, p] : support[s]) {
            if (slate.size() != slate_size) throw config_error("policy: wrong slate size");
            if (p < 0.0) throw config_error("policy: negative probability");
            if (slate.contains(s)) throw config_error("policy: support slate contains its state");
            std::set<int> distinct(slate.items.begin(), slate.items.end());
            if (static_cast<int>(distinct.size()) != slate.size())
                throw config_error("policy: duplicate item in slate");
            for (int id : slate.items)
                if (id < 0 || id >= num_states) throw config_error("policy: item id out of range");
            if (!seen.insert(slate).second) throw config_error("policy: duplicate slate in support");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) throw config_error("policy: probabilities do not sum to 1");
    }
}

const Slate& RandomizedPolicy::sample(int s, Rng& rng) const {
    const auto& row = support[s];
    double u = rng.uniform();
    for (const auto& [slate, p] : row) {
        u -= p;
        if (u < 0.0) return slate;
    }
    return row.back().first;
}

RandomizedPolicy RandomizedPolicy::deterministic(std::vector<Slate> slates) {
    RandomizedPolicy pol;
    pol.num_states = static_cast<int>(slates.size());
    pol.slate_size = slates.empty() ? 0 : slates.front().size();
    pol.support.resize(slates.size());
    for (std::size_t s = 0; s < slates.size(); ++s)
        pol.support[s].emplace_back(std::move(slates[s]), 1.0);
    return pol;
}

RandomizedPolicy random_test_policy(int k, int n, int max_support, Rng& rng) {
    RandomizedPolicy pol;
    pol.num_states = k;
    pol.slate_size = n;
    pol.support.resize(k);
    for (int s = 0; s < k; ++s) {
        std::set<Slate> chosen;
        while (static_cast<int>(chosen.size()) < max_support &&
               chosen.size() < count_slates(k - 1, n))
            chosen.insert(random_slate(k, s, n, rng));
        // symmetric Dirichlet(1): normalized Exp(1) draws
        std::vector<double> w;
        double total = 0.0;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            double e = -std::log(1.0 - rng.uniform());
            w.push_back(e);
            total += e;
        }
        std::size_t i = 0;
        for (const auto& slate : chosen) pol.support[s].emplace_back(slate, w[i++] / total);
    }
    return pol;
}

RandomizedPolicy uniform_policy(int k, int n) {
    RandomizedPolicy pol;
    pol.num_states = k;
    pol.slate_size = n;
    pol.support.resize(k);
    for (int s = 0; s < k; ++s) {
        auto slates = enumerate_slates(k, s, n);
        const double p = 1.0 / static_cast<double>(slates.size());
        for (auto& slate : slates) pol.support[s].emplace_back(std::move(slate), p);
    }
    return pol;
}

} // namespace slatefree
