#include "slatefree/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "slatefree/errors.hpp"
#include "slatefree/policy.hpp"

namespace slatefree {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!j.is_object()) throw config_error("config: " + ctx + " must be an object");
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw config_error("config: unknown key '" + item.key() + "' in " + ctx);
}

UserSpec parse_user(const json& j) {
    expect_keys(j, {"name", "variant", "alpha", "excluded", "required", "reject_excludes_required"},
                "user spec");
    UserSpec u;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "user1") u.variant = UserVariant::User1;
    else if (variant == "user2") u.variant = UserVariant::User2;
    else if (variant == "user3") u.variant = UserVariant::User3;
    else throw config_error("config: unknown user variant '" + variant + "'");
    u.name = j.value("name", variant);
    u.alpha = j.value("alpha", 0.75);
    if (j.contains("excluded")) u.excluded = j.at("excluded").get<std::vector<int>>();
    if (j.contains("required")) u.required = j.at("required").get<std::vector<int>>();
    u.reject_excludes_required = j.value("reject_excludes_required", false);
    return u;
}

AgentSpec parse_agent(const json& j, double default_discount) {
    expect_keys(j,
                {"name", "algorithm", "gamma", "lambda", "epsilon", "optimistic_init",
                 "updates_per_step", "slateq_reject_update", "slateq_bootstrap"},
                "agent spec");
    AgentSpec a;
    a.config.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    a.name = j.value("name", algorithm_name(a.config.algorithm));
    a.config.learning_rate = j.value("gamma", 0.004);
    a.config.discount = j.value("lambda", default_discount);
    a.config.epsilon = j.value("epsilon", 0.05);
    a.config.optimistic_init = j.value("optimistic_init", 0.0);
    a.config.updates_per_step = j.value("updates_per_step", 0);
    const std::string reject = j.value("slateq_reject_update", "none");
    if (reject == "none") a.config.slateq_reject = AgentConfig::SlateQReject::None;
    else if (reject == "null-item") a.config.slateq_reject = AgentConfig::SlateQReject::NullItem;
    else throw config_error("config: slateq_reject_update must be none|null-item");
    const std::string boot = j.value("slateq_bootstrap", "greedy");
    if (boot == "greedy") a.config.slateq_bootstrap = AgentConfig::SlateQBootstrap::Greedy;
    else if (boot == "taken") a.config.slateq_bootstrap = AgentConfig::SlateQBootstrap::Taken;
    else throw config_error("config: slateq_bootstrap must be greedy|taken");
    return a;
}

// Exact value of the agent's current greedy policy; a K x K linear solve,
// no slate enumeration, so it works at any catalog size.
std::vector<double> evaluate_greedy_policy(const Agent& agent, const Catalog& catalog,
                                           const UserModel& model, double discount,
                                           CostMode mode) {
    const int k = catalog.size_k;
    std::vector<Slate> slates(k);
    for (int s = 0; s < k; ++s) slates[s] = agent.greedy(s);
    auto policy = RandomizedPolicy::deterministic(std::move(slates));
    auto p_pi = transition_matrix_for_policy(model, policy);

    std::vector<double> a(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<double> b(k, 0.0);
    for (int s = 0; s < k; ++s) {
        b[s] = expected_slate_cost(catalog, model, mode, s, policy.support[s][0].first);
        for (int t = 0; t < k; ++t) a[s * k + t] = -discount * p_pi[s][t];
        a[s * k + s] += 1.0;
    }
    // Gaussian elimination, partial pivoting
    std::vector<double> x(k);
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
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
    for (int r = k - 1; r >= 0; --r) {
        double sum = b[r];
        for (int c = r + 1; c < k; ++c) sum -= a[r * k + c] * x[c];
        x[r] = sum / a[r * k + r];
    }
    return x;
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

} // namespace

UserModel UserSpec::build(int catalog_size) const {
    switch (variant) {
    case UserVariant::User1: return UserModel::user1(catalog_size, alpha);
    case UserVariant::User2: return UserModel::user2(catalog_size, alpha, excluded);
    case UserVariant::User3:
        return UserModel::user3(catalog_size, required, reject_excludes_required);
    }
    throw config_error("user spec: unknown variant");
}

Catalog ExperimentConfig::build_catalog() const {
    return slatefree::build_catalog(k, cost_overrides, cost_seed, penalty, default_base_cost);
}

void ExperimentConfig::validate() const {
    if (k < 2) throw config_error("config: k must be >= 2");
    if (slate_size < 1 || slate_size > k - 1)
        throw config_error("config: slate_size must be in [1, k-1]");
    if (discount <= 0.0 || discount >= 1.0) throw config_error("config: discount must be in (0,1)");
    if (episodes < 1) throw config_error("config: episodes must be positive");
    if (smoothing_window < 1 || smoothing_window > episodes)
        throw config_error("config: smoothing_window must be in [1, episodes]");
    if (!start_uniform && (start_state < 0 || start_state >= k))
        throw config_error("config: fixed start state out of range");
    if (users.empty()) throw config_error("config: at least one user model required");
    if (agents.empty()) throw config_error("config: at least one agent required");
    if (seeds.empty()) throw config_error("config: seeds must be nonempty");
    std::set<std::string> names;
    for (const auto& u : users)
        if (!names.insert("u:" + u.name).second) throw config_error("config: duplicate user name");
    for (const auto& a : agents)
        if (!names.insert("a:" + a.name).second) throw config_error("config: duplicate agent name");
    for (long e : eval_points)
        if (e < 1 || e > episodes) throw config_error("config: eval_point out of range");
}

ExperimentConfig parse_config(const json& j) {
    expect_keys(j,
                {"catalog", "slate_size", "discount", "cost_mode", "users", "agents", "episodes",
                 "smoothing_window", "start_state_mode", "master_seed", "seeds", "eval_points",
                 "return_mode"},
                "top level");
    ExperimentConfig cfg;

    const json& cat = j.at("catalog");
    expect_keys(cat, {"k", "cost_overrides", "cost_seed", "penalty", "default_base_cost"},
                "catalog");
    cfg.k = cat.at("k").get<int>();
    if (cat.contains("cost_overrides"))
        for (const auto& pair : cat.at("cost_overrides")) {
            if (!pair.is_array() || pair.size() != 2)
                throw config_error("config: cost_overrides entries must be [id, base]");
            cfg.cost_overrides.emplace_back(pair[0].get<int>(), pair[1].get<double>());
        }
    cfg.cost_seed = cat.value("cost_seed", 0ull);
    cfg.penalty = cat.value("penalty", 0.0);
    cfg.default_base_cost = cat.value("default_base_cost", 20.0);

    cfg.slate_size = j.at("slate_size").get<int>();
    cfg.discount = j.value("discount", 0.85);
    const std::string mode = j.value("cost_mode", "state_only");
    if (mode == "state_only") cfg.cost_mode = CostMode::StateOnly;
    else if (mode == "slate_penalty") cfg.cost_mode = CostMode::SlatePenalty;
    else throw config_error("config: cost_mode must be state_only|slate_penalty");

    for (const auto& u : j.at("users")) cfg.users.push_back(parse_user(u));
    for (const auto& a : j.at("agents")) cfg.agents.push_back(parse_agent(a, cfg.discount));

    cfg.episodes = j.at("episodes").get<long>();
    cfg.smoothing_window = j.value("smoothing_window", 200);
    if (j.contains("start_state_mode")) {
        const json& ss = j.at("start_state_mode");
        if (ss.is_string() && ss.get<std::string>() == "uniform") {
            cfg.start_uniform = true;
        } else if (ss.is_object() && ss.contains("fixed") && ss.size() == 1) {
            cfg.start_uniform = false;
            cfg.start_state = ss.at("fixed").get<int>();
        } else {
            throw config_error("config: start_state_mode must be \"uniform\" or {\"fixed\": s}");
        }
    }
    cfg.master_seed = j.value("master_seed", 1ull);
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    else cfg.seeds = {cfg.master_seed};
    if (j.contains("eval_points")) cfg.eval_points = j.at("eval_points").get<std::vector<long>>();
    const std::string rmode = j.value("return_mode", "undiscounted");
    if (rmode == "undiscounted") cfg.return_mode = ReturnMode::Undiscounted;
    else if (rmode == "discounted") cfg.return_mode = ReturnMode::Discounted;
    else throw config_error("config: return_mode must be undiscounted|discounted");

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

EpisodeResult run_episode(const Env& env, Agent& agent, double discount, ReturnMode mode,
                          int start_state, Rng& agent_rng, Rng& env_rng,
                          std::vector<Transition>* transcript) {
    const Catalog& catalog = *env.catalog;
    EpisodeResult out;
    double weight = 1.0;
    int s = start_state;
    Slate slate = agent.act(s, agent_rng);
    for (;;) {
        const int s_next = env.model->sample_next_state(s, slate, env_rng);
        double cost = catalog.base_costs[s];
        if (env.cost_mode == CostMode::SlatePenalty && !slate.contains(s_next))
            cost += catalog.penalty;
        Slate slate_next = agent.act(s_next, agent_rng);
        agent.update(Step{s, &slate, cost, s_next, &slate_next}, agent_rng);

        out.ret += (mode == ReturnMode::Discounted ? weight : 1.0) * cost;
        weight *= discount;
        ++out.length;
        if (transcript) transcript->push_back(Transition{s, slate, cost, s_next});

        if (env_rng.uniform() < 1.0 - discount) break;
        s = s_next;
        slate = std::move(slate_next);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Catalog catalog = cfg.build_catalog();

    std::vector<UserModel> models;
    models.reserve(cfg.users.size());
    for (const auto& u : cfg.users) models.push_back(u.build(cfg.k));

    ExperimentResult result;
    for (std::size_t ui = 0; ui < cfg.users.size(); ++ui) {
        try {
            auto sol = value_iteration(models[ui], catalog, cfg.slate_size, cfg.discount,
                                       cfg.cost_mode);
            result.oracle_values.emplace_back(cfg.users[ui].name, std::move(sol.values));
        } catch (const capacity_error&) {
            // no ground truth at this scale; summaries fall back to relative numbers
        }
    }

    struct CellSpec {
        std::size_t agent_idx, user_idx;
        std::uint64_t seed;
    };
    std::vector<CellSpec> specs;
    for (std::size_t ai = 0; ai < cfg.agents.size(); ++ai)
        for (std::size_t ui = 0; ui < cfg.users.size(); ++ui)
            for (std::uint64_t seed : cfg.seeds) specs.push_back({ai, ui, seed});

    result.cells.resize(specs.size());

#pragma omp parallel for schedule(dynamic)
    for (long ci = 0; ci < static_cast<long>(specs.size()); ++ci) {
        const CellSpec& spec = specs[ci];
        const AgentSpec& aspec = cfg.agents[spec.agent_idx];
        const UserSpec& uspec = cfg.users[spec.user_idx];
        const UserModel& model = models[spec.user_idx];

        CellResult cell;
        cell.agent = aspec.name;
        cell.user = uspec.name;
        cell.seed = spec.seed;
        const std::string tag =
            aspec.name + "|" + uspec.name + "|" + std::to_string(spec.seed);
        cell.agent_seed = derive_seed(cfg.master_seed, "agent|" + tag);
        cell.env_seed = derive_seed(cfg.master_seed, "env|" + tag);

        std::unique_ptr<Agent> agent;
        try {
            agent = make_agent(aspec.config, cfg.k, cfg.slate_size, &model);
        } catch (const capacity_error& e) {
            cell.notices.push_back(std::string("agent refused: ") + e.what());
            result.cells[ci] = std::move(cell);
            continue;
        }

        Rng agent_rng(cell.agent_seed);
        Rng env_rng(cell.env_seed);
        Env env{&catalog, &model, cfg.cost_mode};

        std::set<long> eval_set(cfg.eval_points.begin(), cfg.eval_points.end());
        cell.returns.reserve(cfg.episodes);
        cell.lengths.reserve(cfg.episodes);
        cell.updates.reserve(cfg.episodes);

        std::uint64_t writes_before = 0;
        for (long e = 0; e < cfg.episodes; ++e) {
            const int start = cfg.start_uniform ? env_rng.uniform_int(cfg.k) : cfg.start_state;
            auto ep = run_episode(env, *agent, cfg.discount, cfg.return_mode, start,
                                  agent_rng, env_rng);
            cell.returns.push_back(ep.ret);
            cell.lengths.push_back(ep.length);
            cell.updates.push_back(static_cast<std::uint32_t>(agent->table_writes() - writes_before));
            writes_before = agent->table_writes();

            if (eval_set.contains(e + 1)) {
                EvalSnapshot snap;
                snap.episode = e + 1;
                snap.greedy_values =
                    evaluate_greedy_policy(*agent, catalog, model, cfg.discount, cfg.cost_mode);
                snap.mean = mean_of(snap.greedy_values);
                cell.evals.push_back(std::move(snap));
            }
        }
        cell.final_greedy_values =
            evaluate_greedy_policy(*agent, catalog, model, cfg.discount, cfg.cost_mode);
        result.cells[ci] = std::move(cell);
    }
    return result;
}

std::vector<double> smooth(const std::vector<double>& xs, int window) {
    std::vector<double> out(xs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += xs[i];
        if (i >= static_cast<std::size_t>(window)) acc -= xs[i - window];
        const std::size_t w = std::min<std::size_t>(i + 1, window);
        out[i] = acc / static_cast<double>(w);
    }
    return out;
}

std::size_t band_entry(const std::vector<double>& smoothed, double target, double frac,
                       std::size_t hold) {
    // first index from which the curve stays inside the band for `hold`
    // consecutive episodes (or through the end); transient touches don't count
    const double tol = frac * std::abs(target);
    std::size_t run = 0;
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        if (std::abs(smoothed[i] - target) <= tol) {
            ++run;
            if (run >= hold || i + 1 == smoothed.size()) return i + 1 - run;
        } else {
            run = 0;
        }
    }
    return smoothed.size();
}

std::string to_csv(const ExperimentResult& result) {
    std::string out = "episode,agent,user,seed,return,length,updates\n";
    char buf[64];
    for (const auto& cell : result.cells)
        for (std::size_t e = 0; e < cell.returns.size(); ++e) {
            std::snprintf(buf, sizeof(buf), "%.17g", cell.returns[e]);
            out += std::to_string(e + 1);
            out += ',';
            out += cell.agent;
            out += ',';
            out += cell.user;
            out += ',';
            out += std::to_string(cell.seed);
            out += ',';
            out += buf;
            out += ',';
            out += std::to_string(cell.lengths[e]);
            out += ',';
            out += std::to_string(cell.updates[e]);
            out += '\n';
        }
    return out;
}

nlohmann::json to_summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    json summary;
    summary["master_seed"] = cfg.master_seed;
    summary["episodes"] = cfg.episodes;
    summary["k"] = cfg.k;
    summary["slate_size"] = cfg.slate_size;
    summary["discount"] = cfg.discount;
    summary["smoothing_window"] = cfg.smoothing_window;

    json oracle = json::object();
    for (const auto& [user, values] : result.oracle_values) {
        oracle[user] = {{"values", values}, {"mean", mean_of(values)}};
    }
    summary["oracle"] = oracle;

    json cells = json::array();
    for (const auto& cell : result.cells) {
        json c;
        c["agent"] = cell.agent;
        c["user"] = cell.user;
        c["seed"] = cell.seed;
        c["agent_seed"] = cell.agent_seed;
        c["env_seed"] = cell.env_seed;
        c["episodes"] = cell.returns.size();
        if (!cell.returns.empty()) {
            auto sm = smooth(cell.returns, cfg.smoothing_window);
            c["tail_smoothed_return"] = sm.back();
        }
        if (!cell.final_greedy_values.empty()) {
            c["final_greedy_values"] = cell.final_greedy_values;
            c["final_greedy_mean"] = mean_of(cell.final_greedy_values);
            for (const auto& [user, values] : result.oracle_values)
                if (user == cell.user) {
                    c["oracle_gap"] = mean_of(cell.final_greedy_values) - mean_of(values);
                    break;
                }
        }
        if (!cell.evals.empty()) {
            json evals = json::array();
            for (const auto& snap : cell.evals)
                evals.push_back({{"episode", snap.episode},
                                 {"greedy_values", snap.greedy_values},
                                 {"mean", snap.mean}});
            c["eval_points"] = std::move(evals);
        }
        if (!cell.notices.empty()) c["notices"] = cell.notices;
        cells.push_back(std::move(c));
    }
    summary["cells"] = std::move(cells);
    return summary;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                   const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(out_dir + "/results.csv", std::ios::binary);
        csv << to_csv(result);
    }
    {
        std::ofstream js(out_dir + "/summary.json", std::ios::binary);
        js << to_summary_json(cfg, result).dump(2) << '\n';
    }
}

} // namespace slatefree
