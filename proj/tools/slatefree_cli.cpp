// Experiment CLI: run learning experiments, query the exact solver, verify
// the decomposition identities, and render learning-curve figures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "slatefree/decomposition.hpp"
#include "slatefree/errors.hpp"
#include "slatefree/exact_solver.hpp"
#include "slatefree/experiment.hpp"
#include "slatefree/plot.hpp"

using nlohmann::json;
using namespace slatefree;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    auto cfg = load_config(config_path);
    auto result = run_experiment(cfg);
    write_outputs(cfg, result, out_dir);
    std::cout << "wrote " << out_dir << "/results.csv and " << out_dir << "/summary.json\n";
    return 0;
}

int cmd_solve_exact(const std::string& config_path) {
    auto cfg = load_config(config_path);
    const Catalog catalog = cfg.build_catalog();
    json out;
    out["k"] = cfg.k;
    out["slate_size"] = cfg.slate_size;
    out["discount"] = cfg.discount;
    json users = json::array();
    for (const auto& uspec : cfg.users) {
        auto model = uspec.build(cfg.k);
        auto sol = value_iteration(model, catalog, cfg.slate_size, cfg.discount, cfg.cost_mode);
        json u;
        u["user"] = uspec.name;
        u["values"] = sol.values;
        json slates = json::array();
        for (const auto& slate : sol.optimal_slates) slates.push_back(slate.items);
        u["optimal_slates"] = std::move(slates);
        u["iterations"] = sol.iterations;
        u["final_delta"] = sol.final_delta;
        users.push_back(std::move(u));
    }
    out["users"] = std::move(users);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_verify(const std::string& config_path, int policies, double tol1) {
    auto cfg = load_config(config_path);
    const Catalog catalog = cfg.build_catalog();
    json report;
    report["policies_per_user"] = policies;
    bool ok = true;
    json users = json::array();
    Rng rng(derive_seed(cfg.master_seed, "verify"));
    for (const auto& uspec : cfg.users) {
        auto model = uspec.build(cfg.k);
        double worst_t1 = 0.0, worst_p3 = 0.0, worst_rowsum = 0.0, worst_freqsum = 0.0;
        for (int p = 0; p < policies; ++p) {
            auto policy = random_test_policy(cfg.k, cfg.slate_size, 10, rng);
            worst_t1 = std::max(worst_t1,
                                verify_theorem1(policy, model, catalog, cfg.discount, cfg.cost_mode));
            auto marg = compute_marginals(policy, model, catalog, cfg.cost_mode);
            for (int s = 0; s < cfg.k; ++s) {
                double freq_sum = 0.0;
                for (int j = 0; j < cfg.k; ++j) {
                    freq_sum += marg.frequency(s, j);
                    if (!marg.is_defined(s, j)) continue;
                    double row = 0.0;
                    for (double x : marg.transition(s, j)) row += x;
                    worst_rowsum = std::max(worst_rowsum, std::abs(row - 1.0));
                    worst_p3 = std::max(worst_p3, verify_property3(policy, model, s, j));
                }
                worst_freqsum =
                    std::max(worst_freqsum, std::abs(freq_sum - cfg.slate_size));
            }
        }
        auto t2 = verify_theorem2(model, catalog, cfg.slate_size, cfg.discount, cfg.cost_mode);
        json u;
        u["user"] = uspec.name;
        u["theorem1_max_residual"] = worst_t1;
        u["property3_max_residual"] = worst_p3;
        u["transition_rowsum_max_error"] = worst_rowsum;
        u["frequency_rowsum_max_error"] = worst_freqsum;
        u["theorem2_residual"] = t2.residual;
        u["theorem2_onslate_spread"] = t2.onslate_spread;
        u["theorem2_min_gap"] = t2.min_gap;
        u["theorem2_greedy_matches"] = t2.greedy_matches;
        const bool user_ok = worst_t1 <= tol1 && worst_p3 <= 1e-12 && worst_rowsum <= 1e-10 &&
                             worst_freqsum <= 1e-10 && t2.residual <= 1e-8 &&
                             t2.onslate_spread <= 1e-10 && t2.greedy_matches;
        u["ok"] = user_ok;
        ok = ok && user_ok;
        users.push_back(std::move(u));
    }
    report["users"] = std::move(users);
    report["ok"] = ok;
    std::cout << report.dump(2) << '\n';
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slatefree: slate-MDP decomposition learners and oracles"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", csv_path, svg_path;
    int window = 200, policies = 20;
    double tol1 = 1e-9;

    auto* run = app.add_subcommand("run", "run a learning experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out-dir", out_dir, "output directory");

    auto* solve = app.add_subcommand("solve-exact", "brute-force V*, optimal slates, residuals");
    solve->add_option("--config", config_path, "experiment config (JSON)")->required();

    auto* verify = app.add_subcommand("verify", "run the decomposition identity suite");
    verify->add_option("--config", config_path, "experiment config (JSON)")->required();
    verify->add_option("--policies", policies, "random test policies per user");
    verify->add_option("--tolerance", tol1, "theorem-1 residual tolerance");

    auto* plot = app.add_subcommand("plot", "render learning curves from a results CSV");
    plot->add_option("--csv", csv_path, "results CSV from `run`")->required();
    plot->add_option("--out", svg_path, "output SVG path")->required();
    plot->add_option("--window", window, "smoothing window");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (solve->parsed()) return cmd_solve_exact(config_path);
        if (verify->parsed()) return cmd_verify(config_path, policies, tol1);
        if (plot->parsed()) {
            emit_plot(csv_path, svg_path, window);
            std::cout << "wrote " << svg_path << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        json err;
        err["error"] = e.what();
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 1;
}
