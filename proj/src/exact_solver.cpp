#include "slatefree/exact_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "slatefree/combinatorics.hpp"
#include "slatefree/errors.hpp"

namespace slatefree {

namespace {

void check_capacity(int k, int n) {
    const std::uint64_t per_state = count_slates(k - 1, n);
    if (per_state > kCapacityGuard / static_cast<std::uint64_t>(k))
        throw capacity_error("exact solver: instance exceeds the state-slate pair budget");
}

// Gaussian elimination with partial pivoting; a is row-major k x k.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
    const int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
        if (a[pivot * k + col] == 0.0) throw std::runtime_error("solve_linear: singular system");
        if (pivot != col) {
            for (int c = 0; c < k; ++c) std::swap(a[col * k + c], a[pivot * k + c]);
            std::swap(b[col], b[pivot]);
        }
        for (int r = col + 1; r < k; ++r) {
            const double f = a[r * k + col] / a[col * k + col];
            if (f == 0.0) continue;
            for (int c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(k);
    for (int r = k - 1; r >= 0; --r) {
        double sum = b[r];
        for (int c = r + 1; c < k; ++c) sum -= a[r * k + c] * x[c];
        x[r] = sum / a[r * k + r];
    }
    return x;
}

struct SlateSpace {
    std::vector<std::vector<Slate>> slates;            // [state][rank]
    std::vector<std::vector<std::vector<double>>> dist; // [state][rank] -> length-K choice dist
    std::vector<std::vector<double>> cost;              // [state][rank] expected slate cost
};

SlateSpace build_space(const UserModel& model, const Catalog& catalog, int n, CostMode mode) {
    const int k = catalog.size_k;
    check_capacity(k, n);
    SlateSpace sp;
    sp.slates.resize(k);
    sp.dist.resize(k);
    sp.cost.resize(k);
    for (int s = 0; s < k; ++s) {
        sp.slates[s] = enumerate_slates(k, s, n);
        sp.dist[s].reserve(sp.slates[s].size());
        sp.cost[s].reserve(sp.slates[s].size());
        for (const auto& slate : sp.slates[s]) {
            auto d = model.choice_distribution(s, slate);
            double c = catalog.base_costs[s];
            if (mode == CostMode::SlatePenalty && catalog.penalty != 0.0) {
                double reject = 0.0;
                for (int t = 0; t < k; ++t)
                    if (!slate.contains(t)) reject += d[t];
                c += catalog.penalty * reject;
            }
            sp.dist[s].push_back(std::move(d));
            sp.cost[s].push_back(c);
        }
    }
    return sp;
}

} // namespace

double expected_slate_cost(const Catalog& catalog, const UserModel& model,
                           CostMode mode, int s, const Slate& slate) {
    double c = catalog.base_costs[s];
    if (mode == CostMode::SlatePenalty && catalog.penalty != 0.0) {
        auto d = model.choice_distribution(s, slate);
        double reject = 0.0;
        for (int t = 0; t < catalog.size_k; ++t)
            if (!slate.contains(t)) reject += d[t];
        c += catalog.penalty * reject;
    }
    return c;
}

ExactSolution policy_evaluation(const RandomizedPolicy& policy, const UserModel& model,
                                const Catalog& catalog, double discount, CostMode mode) {
    const int k = catalog.size_k;
    const int n = policy.slate_size;
    check_capacity(k, n);

    // V solves (I - lambda * P_pi) V = c_pi, both built from the support only.
    auto p_pi = transition_matrix_for_policy(model, policy);
    std::vector<double> c_pi(k, 0.0);
    for (int s = 0; s < k; ++s)
        for (const auto& [slate, prob] : policy.support[s])
            c_pi[s] += prob * expected_slate_cost(catalog, model, mode, s, slate);

    std::vector<double> a(static_cast<std::size_t>(k) * k, 0.0);
    for (int s = 0; s < k; ++s) {
        for (int t = 0; t < k; ++t) a[s * k + t] = -discount * p_pi[s][t];
        a[s * k + s] += 1.0;
    }
    auto values = solve_linear(std::move(a), c_pi);

    // One backup over the full slate space gives Q(s, omega).
    auto sp = build_space(model, catalog, n, mode);
    const std::uint64_t per_state = count_slates(k - 1, n);
    ExactSolution sol;
    sol.slate_q = SlateQTable(k, per_state, 0.0);
    for (int s = 0; s < k; ++s)
        for (std::uint64_t r = 0; r < per_state; ++r) {
            double future = 0.0;
            for (int t = 0; t < k; ++t) future += sp.dist[s][r][t] * values[t];
            sol.slate_q.at(s, r) = sp.cost[s][r] + discount * future;
        }
    sol.values = std::move(values);
    sol.iterations = 1;
    sol.final_delta = 0.0;
    return sol;
}

std::vector<double> policy_values_iterative(const RandomizedPolicy& policy,
                                            const UserModel& model, const Catalog& catalog,
                                            double discount, CostMode mode, double threshold) {
    const int k = catalog.size_k;
    auto p_pi = transition_matrix_for_policy(model, policy);
    std::vector<double> c_pi(k, 0.0);
    for (int s = 0; s < k; ++s)
        for (const auto& [slate, prob] : policy.support[s])
            c_pi[s] += prob * expected_slate_cost(catalog, model, mode, s, slate);

    std::vector<double> v(k, 0.0), next(k, 0.0);
    for (int it = 0; it < 100000; ++it) {
        double delta = 0.0;
        for (int s = 0; s < k; ++s) {
            double future = 0.0;
            for (int t = 0; t < k; ++t) future += p_pi[s][t] * v[t];
            next[s] = c_pi[s] + discount * future;
            delta = std::max(delta, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (delta <= threshold) break;
    }
    return v;
}

ExactSolution value_iteration(const UserModel& model, const Catalog& catalog,
                              int slate_size, double discount, CostMode mode,
                              double threshold, bool parallel) {
    if (threshold <= 0.0) throw config_error("value_iteration: threshold must be positive");
    const int k = catalog.size_k;
    const int n = slate_size;
    auto sp = build_space(model, catalog, n, mode);
    const std::uint64_t per_state = count_slates(k - 1, n);

    std::vector<double> v(k, 0.0), next(k, 0.0);
    int iterations = 0;
    double delta = 0.0;
    for (;;) {
        // Jacobi sweep: every state backs up against the previous iterate.
#pragma omp parallel for schedule(static) if (parallel)
        for (int s = 0; s < k; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::uint64_t r = 0; r < per_state; ++r) {
                double future = 0.0;
                const auto& d = sp.dist[s][r];
                for (int t = 0; t < k; ++t) future += d[t] * v[t];
                const double q = sp.cost[s][r] + discount * future;
                if (q < best) best = q;
            }
            next[s] = best;
        }
        delta = 0.0;
        for (int s = 0; s < k; ++s) delta = std::max(delta, std::abs(next[s] - v[s]));
        v.swap(next);
        ++iterations;
        if (delta <= threshold || iterations >= 1000000) break;
    }

    ExactSolution sol;
    sol.slate_q = SlateQTable(k, per_state, 0.0);
    sol.values.assign(k, 0.0);
    sol.optimal_slates.resize(k);
    for (int s = 0; s < k; ++s) {
        std::uint64_t best_rank = 0;
        for (std::uint64_t r = 0; r < per_state; ++r) {
            double future = 0.0;
            const auto& d = sp.dist[s][r];
            for (int t = 0; t < k; ++t) future += d[t] * v[t];
            const double q = sp.cost[s][r] + discount * future;
            sol.slate_q.at(s, r) = q;
            if (q < sol.slate_q.at(s, best_rank)) best_rank = r;
        }
        sol.values[s] = sol.slate_q.at(s, best_rank);
        sol.optimal_slates[s] = sp.slates[s][best_rank];
    }
    sol.iterations = iterations;
    sol.final_delta = delta;
    return sol;
}

std::vector<double> evaluate_policy_of_item_table(const ItemQTable& item_q, int slate_size,
                                                  const UserModel& model, const Catalog& catalog,
                                                  double discount, CostMode mode) {
    const int k = catalog.size_k;
    std::vector<Slate> slates(k);
    for (int s = 0; s < k; ++s) slates[s] = greedy_slate(item_q, s, slate_size);
    auto policy = RandomizedPolicy::deterministic(std::move(slates));
    // Evaluation only needs V; skip the full slate-space backup.
    auto p_pi = transition_matrix_for_policy(model, policy);
    std::vector<double> c_pi(k, 0.0);
    for (int s = 0; s < k; ++s)
        c_pi[s] = expected_slate_cost(catalog, model, mode, s, policy.support[s][0].first);
    std::vector<double> a(static_cast<std::size_t>(k) * k, 0.0);
    for (int s = 0; s < k; ++s) {
        for (int t = 0; t < k; ++t) a[s * k + t] = -discount * p_pi[s][t];
        a[s * k + s] += 1.0;
    }
    return solve_linear(std::move(a), std::move(c_pi));
}

} // namespace slatefree
