#ifndef SLATEFREE_USER_MODEL_HPP
#define SLATEFREE_USER_MODEL_HPP

#include <vector>

#include "slatefree/policy.hpp"
#include "slatefree/rng.hpp"
#include "slatefree/slate.hpp"

namespace slatefree {

enum class UserVariant { User1, User2, User3 };

// Markovian simulated user: the choice depends only on the current item and
// the recommended slate, never on the recommender's policy.
class UserModel {
public:
    // User-1: retention alpha on the slate, else uniform over the catalog.
    static UserModel user1(int catalog_size, double alpha);
    // User-2: like User-1 but never picks an item of the excluded set X.
    static UserModel user2(int catalog_size, double alpha, std::vector<int> excluded);
    // User-3: uniform over the slate iff it intersects the required set Y,
    // otherwise uniform over the catalog (or catalog \ Y when
    // reject_excludes_required is set).
    static UserModel user3(int catalog_size, std::vector<int> required,
                           bool reject_excludes_required = false);

    UserVariant variant() const { return variant_; }
    int catalog_size() const { return k_; }
    double alpha() const { return alpha_; }
    const std::vector<int>& excluded_set() const { return excluded_; }
    const std::vector<int>& required_set() const { return required_; }

    // Exact conditional distribution P[s'|s, slate], length K.
    std::vector<double> choice_distribution(int s, const Slate& slate) const;

    // One draw from choice_distribution. Consumes exactly two uniforms.
    int sample_next_state(int s, const Slate& slate, Rng& rng) const;

private:
    UserModel() = default;

    UserVariant variant_ = UserVariant::User1;
    int k_ = 0;
    double alpha_ = 0.0;
    std::vector<int> excluded_;        // X, sorted
    std::vector<int> required_;        // Y, sorted
    std::vector<char> excluded_mask_;
    std::vector<char> required_mask_;
    std::vector<int> library_;         // catalog minus X (User-2) / minus Y (User-3 switch)
    bool reject_excludes_required_ = false;
};

// Row s = sum over the policy support of pi_s(omega) * P[.|s, omega].
std::vector<std::vector<double>> transition_matrix_for_policy(const UserModel& model,
                                                              const RandomizedPolicy& policy);

} // namespace slatefree

#endif
