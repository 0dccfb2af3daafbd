#include "slatefree/user_model.hpp"

#include <algorithm>

#include "slatefree/errors.hpp"

namespace slatefree {

namespace {

std::vector<char> make_mask(int k, const std::vector<int>& ids) {
    std::vector<char> mask(k, 0);
    for (int id : ids) {
        if (id < 0 || id >= k) throw config_error("user model: item id out of range");
        mask[id] = 1;
    }
    return mask;
}

} // namespace

UserModel UserModel::user1(int catalog_size, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw config_error("user1: alpha must be in [0,1]");
    if (catalog_size < 2) throw config_error("user model: catalog too small");
    UserModel m;
    m.variant_ = UserVariant::User1;
    m.k_ = catalog_size;
    m.alpha_ = alpha;
    m.library_.resize(catalog_size);
    for (int i = 0; i < catalog_size; ++i) m.library_[i] = i;
    return m;
}

UserModel UserModel::user2(int catalog_size, double alpha, std::vector<int> excluded) {
    if (alpha < 0.0 || alpha > 1.0) throw config_error("user2: alpha must be in [0,1]");
    if (catalog_size < 2) throw config_error("user model: catalog too small");
    UserModel m;
    m.variant_ = UserVariant::User2;
    m.k_ = catalog_size;
    m.alpha_ = alpha;
    std::sort(excluded.begin(), excluded.end());
    m.excluded_mask_ = make_mask(catalog_size, excluded);
    m.excluded_ = std::move(excluded);
    for (int i = 0; i < catalog_size; ++i)
        if (!m.excluded_mask_[i]) m.library_.push_back(i);
    if (m.library_.empty()) throw config_error("user2: excluded set covers the whole catalog");
    return m;
}

UserModel UserModel::user3(int catalog_size, std::vector<int> required,
                           bool reject_excludes_required) {
    if (required.empty()) throw config_error("user3: required set must be nonempty");
    if (catalog_size < 2) throw config_error("user model: catalog too small");
    UserModel m;
    m.variant_ = UserVariant::User3;
    m.k_ = catalog_size;
    std::sort(required.begin(), required.end());
    m.required_mask_ = make_mask(catalog_size, required);
    m.required_ = std::move(required);
    m.reject_excludes_required_ = reject_excludes_required;
    for (int i = 0; i < catalog_size; ++i)
        if (!reject_excludes_required || !m.required_mask_[i]) m.library_.push_back(i);
    if (m.library_.empty()) throw config_error("user3: rejection branch has no items");
    return m;
}

std::vector<double> UserModel::choice_distribution(int s, const Slate& slate) const {
    const int n = slate.size();
    std::vector<double> p(k_, 0.0);
    switch (variant_) {
    case UserVariant::User1: {
        const double lib = (1.0 - alpha_) / static_cast<double>(k_);
        for (int i = 0; i < k_; ++i) p[i] = lib;
        for (int j : slate.items) p[j] += alpha_ / static_cast<double>(n);
        break;
    }
    case UserVariant::User2: {
        int desired = 0;
        for (int j : slate.items)
            if (!excluded_mask_[j]) ++desired;
        const double lib_mass = desired > 0 ? (1.0 - alpha_) : 1.0;
        const double lib = lib_mass / static_cast<double>(library_.size());
        for (int i : library_) p[i] = lib;
        if (desired > 0)
            for (int j : slate.items)
                if (!excluded_mask_[j]) p[j] += alpha_ / static_cast<double>(desired);
        break;
    }
    case UserVariant::User3: {
        bool hit = false;
        for (int j : slate.items)
            if (required_mask_[j]) { hit = true; break; }
        if (hit) {
            for (int j : slate.items) p[j] = 1.0 / static_cast<double>(n);
        } else {
            const double lib = 1.0 / static_cast<double>(library_.size());
            for (int i : library_) p[i] = lib;
        }
        break;
    }
    }
    return p;
}

int UserModel::sample_next_state(int s, const Slate& slate, Rng& rng) const {
    // Branch draw first, then a selection draw; always two uniforms so the
    // stream layout is the same on every path.
    const double u_branch = rng.uniform();
    const int n = slate.size();
    switch (variant_) {
    case UserVariant::User1:
        if (u_branch < alpha_) return slate.items[rng.uniform_int(n)];
        return static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(k_)));
    case UserVariant::User2: {
        int desired[32];
        int nd = 0;
        for (int j : slate.items)
            if (!excluded_mask_[j]) desired[nd++] = j;
        if (nd > 0 && u_branch < alpha_) return desired[rng.uniform_int(nd)];
        return library_[rng.uniform_int(static_cast<int>(library_.size()))];
    }
    case UserVariant::User3: {
        bool hit = false;
        for (int j : slate.items)
            if (required_mask_[j]) { hit = true; break; }
        if (hit) return slate.items[rng.uniform_int(n)];
        return library_[rng.uniform_int(static_cast<int>(library_.size()))];
    }
    }
    return s; // unreachable
}

std::vector<std::vector<double>> transition_matrix_for_policy(const UserModel& model,
                                                              const RandomizedPolicy& policy) {
    const int k = model.catalog_size();
    std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
    for (int s = 0; s < k; ++s)
        for (const auto& [slate, prob] : policy.support[s]) {
            auto dist = model.choice_distribution(s, slate);
            for (int t = 0; t < k; ++t) rows[s][t] += prob * dist[t];
        }
    return rows;
}

} // namespace slatefree
