#include "sgail/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sgail/trainer.hpp"

namespace sgail {

namespace {

namespace fs = std::filesystem;

TrainConfig base_train_config(const Config& cfg, const std::string& id) {
    Config adjusted = cfg;
    if (!cfg.has("env")) adjusted.set("env", id == "reacher" ? "reacher" : "grid");
    if (!cfg.has("train.epochs"))
        adjusted.set("train.epochs", id == "reacher" ? "10000" : "30000");
    return make_train_config(adjusted);
}

RunSpec condition(const std::string& name, TrainConfig cfg) { return {name, std::move(cfg)}; }

TrainConfig with_variant(TrainConfig cfg, const std::string& variant) {
    cfg.variant = parse_variant(variant);
    return cfg;
}

TrainConfig with_beta(TrainConfig cfg, BetaSchedule::Mode mode, double start, double end,
                      int span) {
    cfg.beta.mode = mode;
    cfg.beta.start = start;
    cfg.beta.end = end;
    cfg.beta.span = span;
    return cfg;
}

} // namespace

ExperimentPlan plan_experiment(const std::string& id, const Config& cfg) {
    ExperimentPlan plan;
    plan.id = id;
    plan.seeds = cfg.get_seed_list("seeds", {0, 1, 2, 3, 4});
    plan.expert_seed = static_cast<std::uint64_t>(cfg.get_double("train.expert_seed", 9000));

    TrainConfig base = base_train_config(cfg, id);
    const int half = std::max(1, base.epochs / 2);

    if (id == "grid-variants") {
        base.expert_per_task = cfg.get_int("train.expert_per_task", 30);
        plan.runs = {
            condition("sgail-erc",
                      with_beta(with_variant(base, "sgail-erc"),
                                BetaSchedule::Mode::Constant, 0.9, 0.9, 1)),
            condition("infogail", with_variant(base, "infogail")),
            condition("infogail-airl", with_variant(base, "infogail-airl")),
            condition("infogail-airl-erc",
                      with_beta(with_variant(base, "infogail-airl-erc"),
                                BetaSchedule::Mode::Constant, 0.9, 0.9, 1)),
        };
    } else if (id == "grid-erc") {
        base.expert_per_task = cfg.get_int("train.expert_per_task", 5);
        TrainConfig sg = with_variant(base, "sgail-erc");
        plan.runs = {
            condition("beta-0.9", with_beta(sg, BetaSchedule::Mode::Constant, 0.9, 0.9, 1)),
            condition("beta-0.6", with_beta(sg, BetaSchedule::Mode::Constant, 0.6, 0.6, 1)),
            condition("beta-0.9to0.6",
                      with_beta(sg, BetaSchedule::Mode::Linear, 0.9, 0.6, half)),
            condition("beta-0.9to0.0",
                      with_beta(sg, BetaSchedule::Mode::Linear, 0.9, 0.0, half)),
        };
    } else if (id == "grid-singleVsMulti") {
        // Equalized demonstration budgets: the multitask model splits the
        // same total number of demonstrations across both tasks.
        const int multi_per_task = cfg.get_int("train.expert_per_task", 5);
        base.eval_sweep = true;
        TrainConfig multi = base;
        multi.expert_per_task = multi_per_task;
        TrainConfig single = base;
        single.expert_per_task = multi_per_task * 2;
        plan.runs = {
            condition("sgail-erc", with_beta(with_variant(multi, "sgail-erc"),
                                             BetaSchedule::Mode::Linear, 0.9, 0.6, half)),
            condition("airl-single", with_variant(single, "airl-single")),
            condition("airl-single-erc",
                      with_beta(with_variant(single, "airl-single-erc"),
                                BetaSchedule::Mode::Linear, 0.9, 0.6, half)),
        };
    } else if (id == "reacher") {
        base.expert_per_task = cfg.get_int("train.expert_per_task", 30);
        plan.runs = {
            condition("sgail-erc",
                      with_beta(with_variant(base, "sgail-erc"),
                                BetaSchedule::Mode::Constant, 0.9, 0.9, 1)),
            condition("infogail", with_variant(base, "infogail")),
            condition("infogail-airl", with_variant(base, "infogail-airl")),
        };
    } else {
        throw std::invalid_argument("unknown experiment '" + id + "'");
    }
    return plan;
}

std::vector<std::vector<Trajectory>> make_expert_data(const Env& env, int per_task,
                                                      std::uint64_t expert_seed) {
    std::vector<std::vector<Trajectory>> experts;
    for (int t = 0; t < env.num_tasks(); ++t)
        experts.push_back(env.expert(t, per_task, mix_seed(expert_seed, t)));
    return experts;
}

std::vector<std::string> execute_run(const RunSpec& run, const Env& env, std::uint64_t seed,
                                     std::uint64_t expert_seed, const std::string& run_dir) {
    TrainConfig cfg = run.cfg;
    cfg.seed = seed;

    auto experts = make_expert_data(env, cfg.expert_per_task, expert_seed);
    TrainResult result;
    try {
        result = train(cfg, env, experts);
    } catch (const std::exception& e) {
        // Flag partial output so the incomplete run is visible downstream.
        write_text_file((fs::path(run_dir) / "run_error.txt").string(), e.what());
        write_manifest((fs::path(run_dir) / "manifest.txt").string(), {"run_error.txt"},
                       run_dir);
        throw;
    }

    std::vector<std::string> files;
    write_metrics_csv((fs::path(run_dir) / "metrics.csv").string(), result.metrics,
                      env.num_tasks());
    files.push_back("metrics.csv");
    result.checkpoint.save((fs::path(run_dir) / "checkpoint.txt").string());
    files.push_back("checkpoint.txt");

    std::vector<Trajectory> all_experts;
    for (const auto& set : experts)
        all_experts.insert(all_experts.end(), set.begin(), set.end());
    export_trajectories_csv((fs::path(run_dir) / "expert_data.csv").string(), all_experts);
    files.push_back("expert_data.csv");

    if (const auto* grid = dynamic_cast<const GridEnv*>(&env)) {
        for (int t = 0; t < env.num_tasks(); ++t) {
            auto value = value_from_checkpoint(result.checkpoint, env,
                                               checkpoint_net_prefix(result.checkpoint, t));
            auto heatmap = compute_value_heatmap(value, *grid, t);
            const std::string name = "heatmap_task" + std::to_string(t + 1) + ".csv";
            write_heatmap_csv((fs::path(run_dir) / name).string(), heatmap);
            files.push_back(name);
        }
    }
    write_manifest((fs::path(run_dir) / "manifest.txt").string(), files, run_dir);
    files.push_back("manifest.txt");
    return files;
}

std::vector<std::string> run_experiment(const Config& cfg, const std::string& out_dir,
                                        int jobs) {
    const std::string id = cfg.get("experiment", "grid-variants");
    ExperimentPlan plan = plan_experiment(id, cfg);

    Config env_cfg = cfg;
    if (!cfg.has("env")) env_cfg.set("env", id == "reacher" ? "reacher" : "grid");

    struct Job {
        const RunSpec* run;
        std::uint64_t seed;
        std::string rel_dir;
    };
    std::vector<Job> todo;
    for (const auto& run : plan.runs)
        for (std::uint64_t seed : plan.seeds)
            todo.push_back({&run, seed,
                            (fs::path(plan.id) / run.condition / ("seed" + std::to_string(seed)))
                                .string()});

    std::mutex mu;
    std::vector<std::string> collected;
    std::exception_ptr first_error;

    auto worker = [&](std::size_t begin, std::size_t stride) {
        // Each (condition, seed) run owns its env instance and output dir.
        for (std::size_t j = begin; j < todo.size(); j += stride) {
            try {
                auto env = make_env(env_cfg);
                const std::string dir = (fs::path(out_dir) / todo[j].rel_dir).string();
                auto files = execute_run(*todo[j].run, *env, todo[j].seed, plan.expert_seed, dir);
                std::lock_guard<std::mutex> lock(mu);
                for (auto& f : files)
                    collected.push_back((fs::path(todo[j].rel_dir) / f).string());
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w, jobs);
        for (auto& th : threads) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Across-seed median curves per condition.
    std::map<std::string, std::vector<std::vector<MetricsRecord>>> runs;
    for (const auto& run : plan.runs)
        for (std::uint64_t seed : plan.seeds)
            runs[run.condition].push_back(read_metrics_csv(
                (fs::path(out_dir) / plan.id / run.condition /
                 ("seed" + std::to_string(seed)) / "metrics.csv")
                    .string()));
    const std::string summary_rel = (fs::path(plan.id) / "summary.csv").string();
    write_curves_csv((fs::path(out_dir) / summary_rel).string(), median_curves(runs));
    collected.push_back(summary_rel);

    std::sort(collected.begin(), collected.end());
    write_manifest((fs::path(out_dir) / plan.id / "manifest.txt").string(), collected, out_dir);
    collected.push_back((fs::path(plan.id) / "manifest.txt").string());
    return collected;
}

} // namespace sgail
