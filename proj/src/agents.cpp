#include "slatefree/agents.hpp"

#include <algorithm>

#include "slatefree/combinatorics.hpp"
#include "slatefree/errors.hpp"
#include "slatefree/exact_solver.hpp"

namespace slatefree {

Algorithm parse_algorithm(const std::string& name) {
    if (name == "vanilla-q") return Algorithm::VanillaQ;
    if (name == "vanilla-sarsa") return Algorithm::VanillaSarsa;
    if (name == "slatefree-q") return Algorithm::SlateFreeQ;
    if (name == "slatefree-sarsa") return Algorithm::SlateFreeSarsa;
    if (name == "slateq") return Algorithm::SlateQ;
    throw config_error("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::VanillaQ: return "vanilla-q";
    case Algorithm::VanillaSarsa: return "vanilla-sarsa";
    case Algorithm::SlateFreeQ: return "slatefree-q";
    case Algorithm::SlateFreeSarsa: return "slatefree-sarsa";
    case Algorithm::SlateQ: return "slateq";
    }
    return "?";
}

namespace {

void check_ranges(const AgentConfig& cfg) {
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate > 1.0)
        throw config_error("agent: learning rate must be in (0,1]");
    if (cfg.discount < 0.0 || cfg.discount >= 1.0)
        throw config_error("agent: discount must be in [0,1)");
    if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0)
        throw config_error("agent: epsilon must be in [0,1]");
}

// One Q-value per (state, slate rank): the non-decomposed baseline.
class VanillaAgent final : public Agent {
public:
    VanillaAgent(const AgentConfig& cfg, int k, int n, bool off_policy)
        : cfg_(cfg), k_(k), n_(n), off_policy_(off_policy) {
        const std::uint64_t per_state = count_slates(k - 1, n);
        if (per_state > kCapacityGuard / static_cast<std::uint64_t>(k))
            throw capacity_error("vanilla agent: full slate table exceeds the pair budget");
        table_ = SlateQTable(k, per_state, cfg.optimistic_init);
    }

    Slate act(int s, Rng& rng) override {
        if (rng.bernoulli(cfg_.epsilon)) return random_slate(k_, s, n_, rng);
        return greedy(s);
    }

    Slate greedy(int s) const override {
        return unrank_slate(table_.argmin_rank(s), k_, s, n_);
    }

    void update(const Step& step, Rng&) override {
        const double bootstrap =
            off_policy_ ? table_.row_min(step.s_next)
                        : table_.at(step.s_next, rank_slate(*step.slate_next, k_, step.s_next));
        double& q = table_.at(step.s, rank_slate(*step.slate, k_, step.s));
        q += cfg_.learning_rate * (step.cost + cfg_.discount * bootstrap - q);
        ++writes_;
    }

    const SlateQTable* slate_table() const override { return &table_; }

private:
    AgentConfig cfg_;
    int k_, n_;
    bool off_policy_;
    SlateQTable table_;
};

// K state-item values per state, N parallel updates per step.
class SlateFreeAgent final : public Agent {
public:
    SlateFreeAgent(const AgentConfig& cfg, int k, int n, bool off_policy)
        : cfg_(cfg), k_(k), n_(n), off_policy_(off_policy), table_(k, cfg.optimistic_init) {}

    Slate act(int s, Rng& rng) override {
        if (rng.bernoulli(cfg_.epsilon)) return random_slate(k_, s, n_, rng);
        return greedy(s);
    }

    Slate greedy(int s) const override { return greedy_slate(table_, s, n_); }

    void update(const Step& step, Rng& rng) override {
        // bootstrap reads pre-update values; the N writes hit distinct entries
        double bootstrap;
        if (off_policy_) {
            bootstrap = table_.row_min(step.s_next);
        } else {
            double sum = 0.0;
            for (int j : step.slate_next->items) sum += table_.at(step.s_next, j);
            bootstrap = sum / static_cast<double>(n_);
        }
        const double td_base = step.cost + cfg_.discount * bootstrap;

        if (cfg_.updates_per_step <= 0 || cfg_.updates_per_step >= n_) {
            for (int j : step.slate->items) {
                double& q = table_.at(step.s, j);
                q += cfg_.learning_rate * (td_base - q);
                ++writes_;
            }
        } else {
            // ablation: only the first m items of the (id-ordered) slate
            // receive the update
            for (int i = 0; i < cfg_.updates_per_step; ++i) {
                double& q = table_.at(step.s, step.slate->items[i]);
                q += cfg_.learning_rate * (td_base - q);
                ++writes_;
            }
        }
    }

    const ItemQTable* item_table() const override { return &table_; }

private:
    AgentConfig cfg_;
    int k_, n_;
    bool off_policy_;
    ItemQTable table_;
};

// Baseline from the literature: decomposition through a known choice model,
// updating only the item the user actually consumed.
class SlateQAgent final : public Agent {
public:
    SlateQAgent(const AgentConfig& cfg, int k, int n, const UserModel* oracle)
        : cfg_(cfg), k_(k), n_(n), oracle_(oracle),
          table_(k, cfg.optimistic_init), null_q_(k, cfg.optimistic_init) {
        if (oracle_ == nullptr) throw config_error("slateq: a choice-model oracle is required");
    }

    Slate act(int s, Rng& rng) override {
        if (rng.bernoulli(cfg_.epsilon)) return random_slate(k_, s, n_, rng);
        return greedy(s);
    }

    Slate greedy(int s) const override { return greedy_slate(table_, s, n_); }

    void update(const Step& step, Rng&) override {
        const bool selected = step.slate->contains(step.s_next);
        if (!selected && cfg_.slateq_reject == AgentConfig::SlateQReject::None) return;

        const Slate boot_slate = cfg_.slateq_bootstrap == AgentConfig::SlateQBootstrap::Greedy
                                     ? greedy(step.s_next)
                                     : *step.slate_next;
        const double target = step.cost + cfg_.discount * expected_slate_value(step.s_next, boot_slate);

        if (selected) {
            double& q = table_.at(step.s, step.s_next);
            q += cfg_.learning_rate * (target - q);
            ++writes_;
        } else {
            // null-item mode: track a per-state rejection value; it never
            // feeds slate construction
            double& q = null_q_[step.s];
            q += cfg_.learning_rate * (target - q);
            ++writes_;
        }
    }

    const ItemQTable* item_table() const override { return &table_; }

private:
    // within-slate selection probabilities, renormalized over the slate
    double expected_slate_value(int s, const Slate& slate) const {
        auto dist = oracle_->choice_distribution(s, slate);
        double mass = 0.0, acc = 0.0;
        for (int j : slate.items) {
            mass += dist[j];
            acc += dist[j] * table_.at(s, j);
        }
        if (mass <= 0.0) {
            // the user would never pick from this slate; fall back to uniform
            acc = 0.0;
            for (int j : slate.items) acc += table_.at(s, j);
            return acc / static_cast<double>(slate.size());
        }
        return acc / mass;
    }

    AgentConfig cfg_;
    int k_, n_;
    const UserModel* oracle_;
    ItemQTable table_;
    std::vector<double> null_q_;
};

} // namespace

std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, int catalog_size, int slate_size,
                                  const UserModel* choice_oracle) {
    check_ranges(cfg);
    switch (cfg.algorithm) {
    case Algorithm::VanillaQ:
        return std::make_unique<VanillaAgent>(cfg, catalog_size, slate_size, true);
    case Algorithm::VanillaSarsa:
        return std::make_unique<VanillaAgent>(cfg, catalog_size, slate_size, false);
    case Algorithm::SlateFreeQ:
        return std::make_unique<SlateFreeAgent>(cfg, catalog_size, slate_size, true);
    case Algorithm::SlateFreeSarsa:
        return std::make_unique<SlateFreeAgent>(cfg, catalog_size, slate_size, false);
    case Algorithm::SlateQ:
        return std::make_unique<SlateQAgent>(cfg, catalog_size, slate_size, choice_oracle);
    }
    throw config_error("make_agent: unknown algorithm");
}

} // namespace slatefree
