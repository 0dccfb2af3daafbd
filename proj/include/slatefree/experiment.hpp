#ifndef SLATEFREE_EXPERIMENT_HPP
#define SLATEFREE_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slatefree/agents.hpp"
#include "slatefree/catalog.hpp"
#include "slatefree/exact_solver.hpp"
#include "slatefree/user_model.hpp"

#include "json.hpp"

namespace slatefree {

enum class ReturnMode { Undiscounted, Discounted };

struct UserSpec {
    std::string name;
    UserVariant variant = UserVariant::User1;
    double alpha = 0.75;
    std::vector<int> excluded;  // X (user-2)
    std::vector<int> required;  // Y (user-3)
    bool reject_excludes_required = false;

    UserModel build(int catalog_size) const;
};

struct AgentSpec {
    std::string name;
    AgentConfig config;
};

struct ExperimentConfig {
    // catalog
    int k = 10;
    std::vector<std::pair<int, double>> cost_overrides;
    std::uint64_t cost_seed = 0;
    double penalty = 0.0;
    double default_base_cost = 20.0;

    int slate_size = 4;
    double discount = 0.85;
    CostMode cost_mode = CostMode::StateOnly;

    std::vector<UserSpec> users;
    std::vector<AgentSpec> agents;

    long episodes = 0;
    int smoothing_window = 200;
    bool start_uniform = true;
    int start_state = 0;
    std::uint64_t master_seed = 1;
    std::vector<std::uint64_t> seeds; // one run per seed per (agent, user) cell
    std::vector<long> eval_points;
    ReturnMode return_mode = ReturnMode::Undiscounted;

    Catalog build_catalog() const;
    void validate() const;
};

// Strict parse: unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct Env {
    const Catalog* catalog = nullptr;
    const UserModel* model = nullptr;
    CostMode cost_mode = CostMode::StateOnly;
};

struct Transition {
    int s;
    Slate slate;
    double cost;
    int s_next;
};

struct EpisodeResult {
    double ret = 0.0;
    int length = 0;
};

// One user walk: geometric length with continuation probability `discount`;
// the agent learns online along the way. The final transition still
// bootstraps; the episode boundary only ends the walk.
EpisodeResult run_episode(const Env& env, Agent& agent, double discount, ReturnMode mode,
                          int start_state, Rng& agent_rng, Rng& env_rng,
                          std::vector<Transition>* transcript = nullptr);

struct EvalSnapshot {
    long episode = 0;
    std::vector<double> greedy_values; // exact value of the greedy policy, per state
    double mean = 0.0;
};

struct CellResult {
    std::string agent;
    std::string user;
    std::uint64_t seed = 0;
    std::vector<double> returns;       // per episode
    std::vector<int> lengths;
    std::vector<std::uint32_t> updates; // table writes per episode
    std::vector<EvalSnapshot> evals;
    std::vector<double> final_greedy_values; // empty if capacity guard tripped
    std::vector<std::string> notices;
    std::uint64_t agent_seed = 0;
    std::uint64_t env_seed = 0;
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    // per user name: brute-force V* when the instance is small enough
    std::vector<std::pair<std::string, std::vector<double>>> oracle_values;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// trailing moving average of width `window`
std::vector<double> smooth(const std::vector<double>& xs, int window);

// first episode whose smoothed value lies within frac of target; returns
// xs.size() when the curve never enters the band
std::size_t band_entry(const std::vector<double>& smoothed, double target, double frac,
                       std::size_t hold = static_cast<std::size_t>(-1));

std::string to_csv(const ExperimentResult& result);
nlohmann::json to_summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                   const std::string& out_dir);

} // namespace slatefree

#endif
