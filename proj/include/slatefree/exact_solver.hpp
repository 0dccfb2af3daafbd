#ifndef SLATEFREE_EXACT_SOLVER_HPP
#define SLATEFREE_EXACT_SOLVER_HPP

#include <vector>

#include "slatefree/catalog.hpp"
#include "slatefree/policy.hpp"
#include "slatefree/qtables.hpp"
#include "slatefree/user_model.hpp"

namespace slatefree {

// Brute-force ground truth over the full combinatorial slate space.
// Refuses instances with more than `kCapacityGuard` state-slate pairs.
inline constexpr std::uint64_t kCapacityGuard = 1'000'000;

struct ExactSolution {
    SlateQTable slate_q;
    std::vector<double> values;        // V(s)
    std::vector<Slate> optimal_slates; // value iteration only
    int iterations = 0;
    double final_delta = 0.0;
};

// Expected one-step cost of showing `slate` at state s: c(s) plus, in
// slate-penalty mode, penalty * P[next state lands outside the slate].
double expected_slate_cost(const Catalog& catalog, const UserModel& model,
                           CostMode mode, int s, const Slate& slate);

// Exact policy evaluation: direct linear solve on V (K unknowns) followed by
// one Bellman backup for Q.
ExactSolution policy_evaluation(const RandomizedPolicy& policy, const UserModel& model,
                                const Catalog& catalog, double discount, CostMode mode);

// Independent route for the same values: successive approximation on V.
std::vector<double> policy_values_iterative(const RandomizedPolicy& policy,
                                            const UserModel& model, const Catalog& catalog,
                                            double discount, CostMode mode,
                                            double threshold = 1e-14);

// Value iteration over the full slate space. Jacobi sweeps, so the result is
// identical whether or not the backup runs parallel.
ExactSolution value_iteration(const UserModel& model, const Catalog& catalog,
                              int slate_size, double discount, CostMode mode,
                              double threshold = 1e-12, bool parallel = true);

// Builds the greedy deterministic slate policy of an item table (N smallest
// per row, ties by item id) and returns its exact evaluation values.
std::vector<double> evaluate_policy_of_item_table(const ItemQTable& item_q, int slate_size,
                                                  const UserModel& model, const Catalog& catalog,
                                                  double discount, CostMode mode);

} // namespace slatefree

#endif
