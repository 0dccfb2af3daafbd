#include "slatefree/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "slatefree/combinatorics.hpp"
#include "slatefree/errors.hpp"

namespace slatefree {

std::vector<double> item_frequencies(const RandomizedPolicy& policy, int k) {
    std::vector<double> r(static_cast<std::size_t>(k) * k, 0.0);
    for (int s = 0; s < policy.num_states; ++s)
        for (const auto& [slate, p] : policy.support[s])
            for (int j : slate.items) r[static_cast<std::size_t>(s) * k + j] += p;
    return r;
}

std::vector<double> item_transition(const RandomizedPolicy& policy, const UserModel& model,
                                    int s, int j) {
    const int k = model.catalog_size();
    double freq = 0.0;
    std::vector<double> acc(k, 0.0);
    for (const auto& [slate, p] : policy.support[s]) {
        if (!slate.contains(j)) continue;
        freq += p;
        auto d = model.choice_distribution(s, slate);
        for (int t = 0; t < k; ++t) acc[t] += p * d[t];
    }
    if (freq <= 0.0) throw undefined_marginal("item_transition: r_{s,j} = 0");
    for (double& x : acc) x /= freq;
    return acc;
}

double marginal_item_cost(const RandomizedPolicy& policy, const Catalog& catalog,
                          const UserModel& model, CostMode mode, int s, int j) {
    double freq = 0.0, acc = 0.0;
    for (const auto& [slate, p] : policy.support[s]) {
        if (!slate.contains(j)) continue;
        freq += p;
        acc += p * expected_slate_cost(catalog, model, mode, s, slate);
    }
    if (freq <= 0.0) throw undefined_marginal("marginal_item_cost: r_{s,j} = 0");
    return acc / freq;
}

ItemMarginals compute_marginals(const RandomizedPolicy& policy, const UserModel& model,
                                const Catalog& catalog, CostMode mode) {
    const int k = catalog.size_k;
    ItemMarginals m;
    m.k = k;
    m.frequencies = item_frequencies(policy, k);
    m.item_transitions.resize(static_cast<std::size_t>(k) * k);
    m.item_costs.assign(static_cast<std::size_t>(k) * k, 0.0);
    m.defined.assign(static_cast<std::size_t>(k) * k, 0);
    for (int s = 0; s < k; ++s)
        for (int j = 0; j < k; ++j) {
            const std::size_t idx = static_cast<std::size_t>(s) * k + j;
            if (m.frequencies[idx] <= 0.0) continue;
            m.defined[idx] = 1;
            m.item_transitions[idx] = item_transition(policy, model, s, j);
            m.item_costs[idx] = marginal_item_cost(policy, catalog, model, mode, s, j);
        }
    return m;
}

ItemQTable state_item_q(const RandomizedPolicy& policy, const SlateQTable& slate_q, int k) {
    ItemQTable q(k, 0.0);
    auto freqs = item_frequencies(policy, k);
    for (int s = 0; s < k; ++s) {
        std::vector<double> acc(k, 0.0);
        for (const auto& [slate, p] : policy.support[s]) {
            const std::uint64_t r = rank_slate(slate, k, s);
            for (int j : slate.items) acc[j] += p * slate_q.at(s, r);
        }
        for (int j = 0; j < k; ++j) {
            const double f = freqs[static_cast<std::size_t>(s) * k + j];
            if (f > 0.0) q.at(s, j) = acc[j] / f;
        }
    }
    return q;
}

double verify_theorem1(const RandomizedPolicy& policy, const UserModel& model,
                       const Catalog& catalog, double discount, CostMode mode) {
    const int k = catalog.size_k;
    const int n = policy.slate_size;
    auto sol = policy_evaluation(policy, model, catalog, discount, mode);
    auto marg = compute_marginals(policy, model, catalog, mode);
    auto item_q = state_item_q(policy, sol.slate_q, k);

    // V_pi(s') recovered purely from item quantities: (1/N) sum_k r Q
    std::vector<double> v_items(k, 0.0);
    for (int s = 0; s < k; ++s) {
        double sum = 0.0;
        for (int j = 0; j < k; ++j)
            if (marg.is_defined(s, j)) sum += marg.frequency(s, j) * item_q.at(s, j);
        v_items[s] = sum / static_cast<double>(n);
    }

    double residual = 0.0;
    for (int s = 0; s < k; ++s)
        for (int j = 0; j < k; ++j) {
            if (!marg.is_defined(s, j)) continue;
            const auto& trans = marg.transition(s, j);
            double future = 0.0;
            for (int t = 0; t < k; ++t) future += trans[t] * v_items[t];
            const double rhs = marg.cost(s, j) + discount * future;
            residual = std::max(residual, std::abs(item_q.at(s, j) - rhs));
        }
    return residual;
}

Theorem2Report verify_theorem2(const UserModel& model, const Catalog& catalog,
                               int slate_size, double discount, CostMode mode) {
    const int k = catalog.size_k;
    const int n = slate_size;
    auto sol = value_iteration(model, catalog, n, discount, mode, 1e-13);
    auto opt_policy = RandomizedPolicy::deterministic(sol.optimal_slates);
    auto marg = compute_marginals(opt_policy, model, catalog, mode);

    // Completed state-item table: V*(s) on the optimal slate; elsewhere the
    // uniform convex combination of Q*(s, omega) over slates containing l,
    // one canonical member of the off-slate freedom.
    ItemQTable q(k, 0.0);
    std::vector<std::vector<Slate>> all_slates(k);
    for (int s = 0; s < k; ++s) {
        all_slates[s] = enumerate_slates(k, s, n);
        std::vector<double> acc(k, 0.0);
        std::vector<int> cnt(k, 0);
        for (std::uint64_t r = 0; r < sol.slate_q.slates_per_state(); ++r)
            for (int j : all_slates[s][r].items) {
                acc[j] += sol.slate_q.at(s, r);
                ++cnt[j];
            }
        const std::uint64_t opt_rank = rank_slate(sol.optimal_slates[s], k, s);
        for (int j = 0; j < k; ++j) {
            if (j == s) continue;
            q.at(s, j) = sol.optimal_slates[s].contains(j) ? sol.slate_q.at(s, opt_rank)
                                                           : acc[j] / cnt[j];
        }
    }

    Theorem2Report rep;
    for (int s = 0; s < k; ++s) {
        // min over the row vs V*
        rep.min_gap = std::max(rep.min_gap, std::abs(q.row_min(s) - sol.values[s]));
        // spread over the optimal slate
        for (int j : sol.optimal_slates[s].items)
            rep.onslate_spread = std::max(rep.onslate_spread, std::abs(q.at(s, j) - sol.values[s]));
        // greedy reconstruction
        if (greedy_slate(q, s, n) != sol.optimal_slates[s]) rep.greedy_matches = false;
        // optimality system restricted to j in omega*(s)
        for (int j : sol.optimal_slates[s].items) {
            const auto& trans = marg.transition(s, j);
            double future = 0.0;
            for (int t = 0; t < k; ++t) future += trans[t] * q.row_min(t);
            const double rhs = marg.cost(s, j) + discount * future;
            rep.residual = std::max(rep.residual, std::abs(q.at(s, j) - rhs));
        }
    }
    return rep;
}

double verify_property3(const RandomizedPolicy& policy, const UserModel& model, int s, int j) {
    const int k = model.catalog_size();
    auto lhs = item_transition(policy, model, s, j);

    // mixture form: sum over slates containing j of P[s'|s,omega] * pi(omega)/r
    double freq = 0.0;
    for (const auto& [slate, p] : policy.support[s])
        if (slate.contains(j)) freq += p;
    if (freq <= 0.0) throw undefined_marginal("verify_property3: r_{s,j} = 0");
    std::vector<double> rhs(k, 0.0);
    for (const auto& [slate, p] : policy.support[s]) {
        if (!slate.contains(j)) continue;
        const double w = p / freq;
        auto d = model.choice_distribution(s, slate);
        for (int t = 0; t < k; ++t) rhs[t] += w * d[t];
    }

    double residual = 0.0;
    for (int t = 0; t < k; ++t) residual = std::max(residual, std::abs(lhs[t] - rhs[t]));
    return residual;
}

} // namespace slatefree
