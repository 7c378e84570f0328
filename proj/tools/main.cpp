#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgail/experiments.hpp"
#include "sgail/io.hpp"
#include "sgail/oracle.hpp"
#include "sgail/trainer.hpp"

namespace fs = std::filesystem;
using namespace sgail;

namespace {

Config load_config(const std::string& path) {
    return path.empty() ? Config{} : Config::load(path);
}

int cmd_train(const std::string& config_path, long seed, const std::string& out,
              const std::string& variant) {
    Config cfg = load_config(config_path);
    if (!variant.empty()) cfg.set("variant", variant);
    if (seed >= 0) cfg.set("train.seed", std::to_string(seed));

    auto env = make_env(cfg);
    TrainConfig tc = make_train_config(cfg);
    const std::uint64_t expert_seed =
        static_cast<std::uint64_t>(cfg.get_double("train.expert_seed", 9000));

    RunSpec run{variant_name(tc.variant), tc};
    auto files = execute_run(run, *env, tc.seed, expert_seed, out);
    std::cout << "wrote " << files.size() << " files under " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& checkpoint_path, long seed,
             int trials) {
    Config cfg = load_config(config_path);
    Checkpoint ckpt = Checkpoint::load(checkpoint_path);
    cfg.set("env", ckpt.meta_at("env"));
    auto env = make_env(cfg);

    const std::uint64_t eval_seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : 0;
    for (int t = 0; t < env->num_tasks(); ++t) {
        auto policy = policy_from_checkpoint(ckpt, *env, checkpoint_net_prefix(ckpt, t));
        const int successes = evaluate(*env, policy.as_greedy_policy(), t, trials,
                                       mix_seed(eval_seed, 7000 + t), true);
        std::cout << "task " << (t + 1) << ": " << successes << "/" << trials << "\n";
    }
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out, long seed,
                   int jobs) {
    Config cfg = load_config(config_path);
    if (seed >= 0) cfg.set("seeds", std::to_string(seed));
    auto files = run_experiment(cfg, out, jobs);
    std::cout << "wrote " << files.size() << " files under " << out << "\n";
    return 0;
}

int cmd_heatmap(const std::string& config_path, const std::string& checkpoint_path,
                const std::string& out) {
    Config cfg = load_config(config_path);
    Checkpoint ckpt = Checkpoint::load(checkpoint_path);
    cfg.set("env", ckpt.meta_at("env"));
    auto env = make_env(cfg);
    const auto* grid = dynamic_cast<const GridEnv*>(env.get());
    if (!grid) throw std::runtime_error("heatmap export requires a grid checkpoint");

    for (int t = 0; t < env->num_tasks(); ++t) {
        auto value = value_from_checkpoint(ckpt, *env, checkpoint_net_prefix(ckpt, t));
        auto heatmap = compute_value_heatmap(value, *grid, t);
        const std::string path =
            (fs::path(out) / ("heatmap_task" + std::to_string(t + 1) + ".csv")).string();
        write_heatmap_csv(path, heatmap);
        std::cout << path << "\n";
    }
    return 0;
}

int cmd_oracle(const std::string& config_path, int task, const std::string& out) {
    Config cfg = load_config(config_path);
    cfg.set("env", "grid");
    auto env = make_env(cfg);
    const auto& world = dynamic_cast<const GridEnv&>(*env).world();

    const double gamma = cfg.get_double("oracle.gamma", 0.95);
    const double omega = cfg.get_double("oracle.omega", 1.0);
    const double tol = cfg.get_double("oracle.tol", 1e-12);

    auto grid_mdp = oracle::grid_tabular_mdp(world, task, gamma, omega);
    auto sol = oracle::soft_value_iteration(grid_mdp.mdp, tol);
    std::printf("soft value iteration: %d iterations, residual %.3e\n", sol.iterations,
                sol.residual);

    if (!out.empty()) {
        HeatmapGrid grid;
        grid.values.assign(GridWorld::kHeight, std::vector<double>(GridWorld::kWidth, 0.0));
        grid.blocked.assign(GridWorld::kHeight, std::vector<bool>(GridWorld::kWidth, true));
        for (std::size_t i = 0; i < grid_mdp.cells.size(); ++i) {
            const GridCell c = grid_mdp.cells[i];
            grid.blocked[c.y][c.x] = false;
            grid.values[c.y][c.x] = sol.v[i];
        }
        const std::string path =
            (fs::path(out) / ("oracle_values_task" + std::to_string(task + 1) + ".csv"))
                .string();
        write_heatmap_csv(path, grid);
        std::cout << path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multitask adversarial imitation learning lab"};
    app.require_subcommand(1);

    std::string config_path, out = "out", variant, checkpoint_path;
    long seed = -1;
    int trials = 40, task = 0, jobs = 1;

    auto* train_cmd = app.add_subcommand("train", "Train one model");
    train_cmd->add_option("--config", config_path, "Config file (key = value lines)");
    train_cmd->add_option("--seed", seed, "Override train.seed");
    train_cmd->add_option("--out", out, "Output directory");
    train_cmd->add_option("--variant", variant, "Override the model variant");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
    eval_cmd->add_option("--config", config_path, "Config file");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint path")->required();
    eval_cmd->add_option("--seed", seed, "Evaluation seed");
    eval_cmd->add_option("--trials", trials, "Trials per task");

    auto* exp_cmd = app.add_subcommand("experiment", "Run a full experiment");
    exp_cmd->add_option("--config", config_path, "Config file");
    exp_cmd->add_option("--out", out, "Output directory");
    exp_cmd->add_option("--seed", seed, "Run a single seed instead of the config list");
    exp_cmd->add_option("--jobs", jobs, "Parallel (condition, seed) runs");

    auto* heat_cmd = app.add_subcommand("heatmap", "Export value heatmaps");
    heat_cmd->add_option("--config", config_path, "Config file");
    heat_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint path")->required();
    heat_cmd->add_option("--out", out, "Output directory");

    auto* oracle_cmd = app.add_subcommand("oracle", "Tabular soft value iteration");
    oracle_cmd->add_option("--config", config_path, "Config file");
    oracle_cmd->add_option("--task", task, "Task index (0-based)");
    oracle_cmd->add_option("--out", out, "Output directory for the value grid");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed()) return cmd_train(config_path, seed, out, variant);
        if (eval_cmd->parsed()) return cmd_eval(config_path, checkpoint_path, seed, trials);
        if (exp_cmd->parsed()) return cmd_experiment(config_path, out, seed, jobs);
        if (heat_cmd->parsed()) return cmd_heatmap(config_path, checkpoint_path, out);
        if (oracle_cmd->parsed()) return cmd_oracle(config_path, task, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
