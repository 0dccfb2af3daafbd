#ifndef SLATEFREE_DECOMPOSITION_HPP
#define SLATEFREE_DECOMPOSITION_HPP

#include <vector>

#include "slatefree/catalog.hpp"
#include "slatefree/exact_solver.hpp"
#include "slatefree/policy.hpp"
#include "slatefree/qtables.hpp"
#include "slatefree/user_model.hpp"

namespace slatefree {

// Marginal quantities of a randomized policy over a slate-MDP: item
// recommendation frequencies, item-conditional transitions and item costs.
// Pairs with r_{s,j} = 0 are marked undefined and carry no values.
struct ItemMarginals {
    int k = 0;
    std::vector<double> frequencies;                 // k*k row-major, r_{s,j}
    std::vector<std::vector<double>> item_transitions; // [s*k+j], empty when undefined
    std::vector<double> item_costs;                  // k*k, c^pi(s,j)
    std::vector<char> defined;                       // k*k, r_{s,j} > 0

    bool is_defined(int s, int j) const { return defined[static_cast<std::size_t>(s) * k + j] != 0; }
    double frequency(int s, int j) const { return frequencies[static_cast<std::size_t>(s) * k + j]; }
    double cost(int s, int j) const { return item_costs[static_cast<std::size_t>(s) * k + j]; }
    const std::vector<double>& transition(int s, int j) const {
        return item_transitions[static_cast<std::size_t>(s) * k + j];
    }
};

// r_{s,j} = sum over support slates containing j of pi_s(omega); k*k row-major.
std::vector<double> item_frequencies(const RandomizedPolicy& policy, int k);

// P^pi[.|s,j]; throws undefined_marginal when r_{s,j} = 0.
std::vector<double> item_transition(const RandomizedPolicy& policy, const UserModel& model,
                                    int s, int j);

// c^pi(s,j); throws undefined_marginal when r_{s,j} = 0.
double marginal_item_cost(const RandomizedPolicy& policy, const Catalog& catalog,
                          const UserModel& model, CostMode mode, int s, int j);

ItemMarginals compute_marginals(const RandomizedPolicy& policy, const UserModel& model,
                                const Catalog& catalog, CostMode mode);

// The state-item table of Def. 4, from an exact slate-Q solution for the
// same policy. Undefined entries are left at 0 (mask them via marginals).
ItemQTable state_item_q(const RandomizedPolicy& policy, const SlateQTable& slate_q, int k);

// Max residual of the decomposed evaluation system over defined (s,j).
double verify_theorem1(const RandomizedPolicy& policy, const UserModel& model,
                       const Catalog& catalog, double discount, CostMode mode);

struct Theorem2Report {
    double residual = 0.0;            // optimality system, j in the optimal slate
    double onslate_spread = 0.0;      // max |Q(s,j) - V*(s)| over j in omega*(s)
    double min_gap = 0.0;             // max |min_l Q(s,l) - V*(s)| over the completed table
    bool greedy_matches = true;       // N smallest completed-row entries == omega*(s)
};

Theorem2Report verify_theorem2(const UserModel& model, const Catalog& catalog,
                               int slate_size, double discount, CostMode mode);

// Residual of the Property-3 mixture identity at (s, j).
double verify_property3(const RandomizedPolicy& policy, const UserModel& model, int s, int j);

} // namespace slatefree

#endif
