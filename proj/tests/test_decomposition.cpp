#include "doctest.h"

#include <cmath>
#include <vector>

#include "slatefree/combinatorics.hpp"
#include "slatefree/decomposition.hpp"
#include "slatefree/errors.hpp"
#include "slatefree/exact_solver.hpp"

using namespace slatefree;

namespace {

Catalog reference_catalog(double penalty = 0.0) {
    return build_catalog(10, {{0, 5.0}, {1, 0.0}, {7, 4.0}, {9, 8.0}}, 7, penalty);
}

} // namespace

TEST_CASE("hand-computed marginals of a two-slate policy") {
    // K = 6, N = 2; state 0 mixes pi({1,2}) = 0.3 with pi({2,4}) = 0.7.
    const int k = 6;
    auto model = UserModel::user1(k, 0.75);
    RandomizedPolicy pol;
    pol.num_states = k;
    pol.slate_size = 2;
    pol.support.resize(k);
    pol.support[0] = {{Slate{1, 2}, 0.3}, {Slate{2, 4}, 0.7}};
    for (int s = 1; s < k; ++s) pol.support[s] = {{Slate{(s + 1) % k, (s + 2) % k}, 1.0}};
    pol.validate();

    auto freq = item_frequencies(pol, k);
    CHECK(freq[0 * k + 1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(freq[0 * k + 2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(freq[0 * k + 4] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(freq[0 * k + 3] == 0.0);
    CHECK(freq[0 * k + 0] == 0.0);
    double row = 0.0;
    for (int j = 0; j < k; ++j) row += freq[0 * k + j];
    CHECK(row == doctest::Approx(2.0).epsilon(1e-14)); // sums to N

    // P^pi[.|0,2] mixes both slates weighted by pi/r; by hand:
    auto p12 = model.choice_distribution(0, Slate{1, 2});
    auto p24 = model.choice_distribution(0, Slate{2, 4});
    auto got = item_transition(pol, model, 0, 2);
    for (int t = 0; t < k; ++t)
        CHECK(got[t] == doctest::Approx(0.3 * p12[t] + 0.7 * p24[t]).epsilon(1e-14));

    // item 1 appears only in {1,2}
    auto got1 = item_transition(pol, model, 0, 1);
    for (int t = 0; t < k; ++t) CHECK(got1[t] == doctest::Approx(p12[t]).epsilon(1e-14));

    CHECK_THROWS_AS(item_transition(pol, model, 0, 3), undefined_marginal);
    CHECK_THROWS_AS(marginal_item_cost(pol, build_catalog(k, {}, 1), model,
                                       CostMode::StateOnly, 0, 0),
                    undefined_marginal);
}

TEST_CASE("marginal invariants over random policies") {
    auto catalog = reference_catalog();
    std::vector<UserModel> models{UserModel::user1(10, 0.75), UserModel::user2(10, 0.75, {0, 1, 8}),
                                  UserModel::user3(10, {0, 1, 8})};
    Rng rng(11);
    for (const auto& model : models)
        for (int trial = 0; trial < 4; ++trial) {
            auto pol = random_test_policy(10, 4, 5, rng);
            auto m = compute_marginals(pol, model, catalog, CostMode::StateOnly);
            for (int s = 0; s < 10; ++s) {
                double row = 0.0;
                for (int j = 0; j < 10; ++j) {
                    row += m.frequency(s, j);
                    if (!m.is_defined(s, j)) continue;
                    double total = 0.0;
                    for (double x : m.transition(s, j)) {
                        CHECK(x >= -1e-15);
                        total += x;
                    }
                    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
                }
                CHECK(row == doctest::Approx(4.0).epsilon(1e-12));
                CHECK_FALSE(m.is_defined(s, s));
            }
        }
}

TEST_CASE("state-item q against a brute-force recomputation") {
    auto catalog = build_catalog(7, {{0, 5.0}, {1, 0.0}}, 3);
    auto model = UserModel::user1(7, 0.6);
    Rng rng(23);
    auto pol = random_test_policy(7, 3, 4, rng);
    auto sol = policy_evaluation(pol, model, catalog, 0.85, CostMode::StateOnly);
    auto q = state_item_q(pol, sol.slate_q, 7);
    auto freq = item_frequencies(pol, 7);
    for (int s = 0; s < 7; ++s)
        for (int j = 0; j < 7; ++j) {
            if (freq[s * 7 + j] <= 0.0) continue;
            double acc = 0.0;
            for (const auto& [slate, prob] : pol.support[s])
                if (slate.contains(j)) acc += prob * sol.slate_q.at(s, rank_slate(slate, 7, s));
            CHECK(q.at(s, j) == doctest::Approx(acc / freq[s * 7 + j]).epsilon(1e-12));
        }
}

TEST_CASE("decomposed evaluation identity holds for random policies") {
    auto catalog = reference_catalog();
    std::vector<UserModel> models{UserModel::user1(10, 0.75), UserModel::user2(10, 0.75, {0, 1, 8}),
                                  UserModel::user3(10, {0, 1, 8})};
    Rng rng(41);
    for (const auto& model : models)
        for (int trial = 0; trial < 3; ++trial) {
            auto pol = random_test_policy(10, 4, 5, rng);
            CHECK(verify_theorem1(pol, model, catalog, 0.85, CostMode::StateOnly) <= 1e-10);
        }
    // slate-penalty costs too
    auto pc = reference_catalog(42.0);
    Rng rng2(43);
    auto pol = random_test_policy(10, 4, 5, rng2);
    CHECK(verify_theorem1(pol, models[0], pc, 0.85, CostMode::SlatePenalty) <= 1e-10);
}

TEST_CASE("deterministic policies: state-item values collapse to V") {
    auto catalog = reference_catalog();
    auto model = UserModel::user1(10, 0.75);
    std::vector<Slate> slates;
    for (int s = 0; s < 10; ++s) {
        std::vector<int> w;
        for (int j = 9; static_cast<int>(w.size()) < 4; --j)
            if (j != s) w.push_back(j);
        slates.push_back(Slate{w});
    }
    auto pol = RandomizedPolicy::deterministic(slates);
    auto sol = policy_evaluation(pol, model, catalog, 0.85, CostMode::StateOnly);
    auto q = state_item_q(pol, sol.slate_q, 10);
    for (int s = 0; s < 10; ++s)
        for (int j : slates[s].items)
            CHECK(q.at(s, j) == doctest::Approx(sol.values[s]).epsilon(1e-12));
    CHECK(verify_theorem1(pol, model, catalog, 0.85, CostMode::StateOnly) <= 1e-10);
}

TEST_CASE("zero discount decomposition") {
    auto catalog = reference_catalog();
    auto model = UserModel::user3(10, {0, 1, 8});
    Rng rng(3);
    auto pol = random_test_policy(10, 4, 4, rng);
    CHECK(verify_theorem1(pol, model, catalog, 0.0, CostMode::StateOnly) <= 1e-12);
}

TEST_CASE("mixture identity for item transitions") {
    auto model = UserModel::user2(10, 0.75, {0, 1, 8});
    Rng rng(59);
    auto pol = random_test_policy(10, 4, 6, rng);
    auto freq = item_frequencies(pol, 10);
    for (int s = 0; s < 10; ++s)
        for (int j = 0; j < 10; ++j)
            if (freq[s * 10 + j] > 0.0) CHECK(verify_property3(pol, model, s, j) <= 1e-12);
}

TEST_CASE("half-half mixture transition by hand") {
    auto model = UserModel::user1(8, 0.7);
    RandomizedPolicy pol;
    pol.num_states = 8;
    pol.slate_size = 3;
    pol.support.resize(8);
    for (int s = 0; s < 8; ++s) {
        int a = (s + 1) % 8, b = (s + 2) % 8, c = (s + 3) % 8, d = (s + 4) % 8;
        pol.support[s] = {{Slate{a, b, c}, 0.5}, {Slate{a, b, d}, 0.5}};
    }
    pol.validate();
    // item a sits in both slates with equal weight: its transition is the mean
    int s = 0, a = 1;
    auto p1 = model.choice_distribution(s, Slate{1, 2, 3});
    auto p2 = model.choice_distribution(s, Slate{1, 2, 4});
    auto got = item_transition(pol, model, s, a);
    for (int t = 0; t < 8; ++t)
        CHECK(got[t] == doctest::Approx(0.5 * (p1[t] + p2[t])).epsilon(1e-14));
    CHECK(verify_property3(pol, model, s, a) <= 1e-14);
}

TEST_CASE("optimality identities on the reference instance") {
    auto catalog = reference_catalog();
    for (const auto& model : {UserModel::user1(10, 0.75), UserModel::user2(10, 0.75, {0, 1, 8}),
                              UserModel::user3(10, {0, 1, 8})}) {
        auto rep = verify_theorem2(model, catalog, 4, 0.85, CostMode::StateOnly);
        CHECK(rep.residual <= 1e-8);
        CHECK(rep.onslate_spread <= 1e-9);
        CHECK(rep.min_gap <= 1e-8);
        CHECK(rep.greedy_matches);
    }
}
