#ifndef SLATEFREE_AGENTS_HPP
#define SLATEFREE_AGENTS_HPP

#include <cstdint>
#include <memory>
#include <string>

#include "slatefree/qtables.hpp"
#include "slatefree/rng.hpp"
#include "slatefree/slate.hpp"
#include "slatefree/user_model.hpp"

namespace slatefree {

enum class Algorithm { VanillaQ, VanillaSarsa, SlateFreeQ, SlateFreeSarsa, SlateQ };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

struct AgentConfig {
    Algorithm algorithm = Algorithm::SlateFreeQ;
    double learning_rate = 0.004; // gamma in the update rules
    double discount = 0.85;      // lambda
    double epsilon = 0.05;
    double optimistic_init = 0.0;
    int updates_per_step = 0;    // SlateFree ablation: m items of the slate per step; 0 = all N

    enum class SlateQReject { None, NullItem };
    enum class SlateQBootstrap { Greedy, Taken };
    SlateQReject slateq_reject = SlateQReject::None;
    SlateQBootstrap slateq_bootstrap = SlateQBootstrap::Greedy;
};

// One environment transition as the agent sees it. slate_next is the action
// actually chosen at s_next (SARSA-style bootstraps use it).
struct Step {
    int s = 0;
    const Slate* slate = nullptr;
    double cost = 0.0;
    int s_next = 0;
    const Slate* slate_next = nullptr;
};

class Agent {
public:
    virtual ~Agent() = default;

    // epsilon-greedy action; every call consumes one bernoulli draw plus,
    // when exploring, one rank draw
    virtual Slate act(int s, Rng& rng) = 0;
    virtual Slate greedy(int s) const = 0;
    virtual void update(const Step& step, Rng& rng) = 0;

    std::uint64_t table_writes() const { return writes_; }

    virtual const ItemQTable* item_table() const { return nullptr; }
    virtual const SlateQTable* slate_table() const { return nullptr; }

protected:
    std::uint64_t writes_ = 0;
};

// SlateQ is the only agent allowed a handle to the true choice model.
std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, int catalog_size, int slate_size,
                                  const UserModel* choice_oracle = nullptr);

} // namespace slatefree

#endif
