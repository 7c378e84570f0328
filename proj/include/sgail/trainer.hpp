#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgail/checkpoint.hpp"
#include "sgail/env.hpp"
#include "sgail/models.hpp"
#include "sgail/optim.hpp"

namespace sgail {

enum class Algo { SGail, InfoGail, InfoGailAirl, AirlSingleTask };

/// Which algorithm is trained and how the task variable is wired:
///  - SGail: task fed to the generator, the AIRL f head, and the value net.
///  - InfoGail: task fed to the generator only; plain discriminator head;
///    mutual-information regularizer active.
///  - InfoGailAirl: like InfoGail but with an AIRL head over (s, a).
///  - AirlSingleTask: one independent model per task, no task input anywhere.
struct ModelVariant {
    Algo algo = Algo::SGail;
    bool erc = false;
    double info_lambda1 = 1.0; // entropy weight; folded into the beta machinery
    double info_lambda2 = 0.1;

    bool uses_airl_head() const { return algo != Algo::InfoGail; }
    bool disc_task_input() const { return algo == Algo::SGail; }
    bool value_task_input() const { return algo == Algo::SGail; }
    bool policy_task_input() const { return algo != Algo::AirlSingleTask; }
    bool uses_posterior() const { return algo == Algo::InfoGail || algo == Algo::InfoGailAirl; }
};

/// Canonical names: sgail, infogail, infogail-airl, airl-single, each with an
/// optional -erc suffix.
std::string variant_name(const ModelVariant& v);
ModelVariant parse_variant(const std::string& name);

struct BetaSchedule {
    enum class Mode { Constant, Linear };
    Mode mode = Mode::Constant;
    double start = 0.9;
    double end = 0.9;
    int span = 1; // epochs of the linear ramp

    void validate() const;
};

/// Constant mode returns start; linear interpolates start->end over [0, span]
/// then holds end.
double beta_at(const BetaSchedule& schedule, int epoch);

struct TrainConfig {
    ModelVariant variant;
    std::string env_id = "grid";
    int expert_per_task = 30;
    int epochs = 1000;
    int episodes_per_epoch = 20;
    int disc_updates = 1;
    int value_updates = 1;
    double gamma = 0.95;
    double lr_disc = 0.001;
    double lr_value = 0.001;
    TrpoConfig trpo;
    BetaSchedule beta;
    std::uint64_t seed = 0;
    int eval_interval = 250;
    int eval_trials = 40;
    bool eval_sweep = false;
    std::vector<int> hidden = {64, 64};
    double gaussian_log_std_init = -0.6931471805599453; // log 0.5

    void validate() const;
};

struct MetricsRecord {
    int epoch = 0;
    double beta = 0.0;
    double d_loss = 0.0;
    double v_loss = 0.0;
    double surrogate_gain = 0.0;
    std::vector<int> success; // per task
};

/// Pre-featurized transition for discriminator-side updates. pi_log_prob is
/// the current policy's likelihood of the recorded action, treated as a
/// constant input (no gradient flows into the policy).
struct DiscSample {
    std::vector<double> features;
    std::vector<double> action;
    std::vector<double> task;
    double pi_log_prob = 0.0;
};

struct DiscLossResult {
    double objective = 0.0; // E_exp[log D] + E_gen[log(1-D)], always < 0
    double loss = 0.0;      // negated objective, minimized
    std::vector<double> grad;
};

DiscLossResult airl_discriminator_loss(const AirlDiscriminator& disc,
                                       std::span<const DiscSample> expert,
                                       std::span<const DiscSample> generated);
DiscLossResult plain_discriminator_loss(const PlainDiscriminator& disc,
                                        std::span<const DiscSample> expert,
                                        std::span<const DiscSample> generated);

struct ValueSample {
    std::vector<double> features;
    std::vector<double> task;
    double target = 0.0;
};

/// One Adam step on the mean squared error between V(s,c) and the targets.
/// Returns the pre-step loss.
double value_regression_step(ValueFunction& value, AdamState& adam,
                             std::span<const ValueSample> batch);

/// Discounted return-to-go along one episode's reward sequence.
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma);

struct QSample {
    std::vector<double> features;
    std::vector<double> action;
    int task_index = 0;
};

/// Variational lower bound E[log Q(c|s,a)] + H(c) on the task/trajectory
/// mutual information, with the prior uniform over n_active_tasks.
double mi_lower_bound(std::span<const QSample> samples, const PosteriorQ& q,
                      int n_active_tasks);

/// One training model instance (all variants except the per-task splitting of
/// AirlSingleTask, which the top-level train() composes out of these).
class Trainer {
  public:
    Trainer(TrainConfig cfg, const Env& env, std::vector<std::vector<Trajectory>> experts,
            std::vector<int> active_tasks, std::uint64_t seed_tag = 0);

    struct EpochStats {
        double beta = 0.0;
        double d_loss = 0.0;
        double d_objective = 0.0;
        double v_loss = 0.0;
        double surrogate_gain = 0.0;
        bool trpo_accepted = false;
    };

    EpochStats run_epoch(int epoch);
    std::vector<Trajectory> collect_rollouts(int epoch);
    double discriminator_update(const std::vector<Trajectory>& rollouts);
    double posterior_update(const std::vector<Trajectory>& rollouts);
    /// Per-trajectory per-step pseudorewards (plus the MI bonus when active).
    std::vector<std::vector<double>> transition_rewards(const std::vector<Trajectory>& rollouts,
                                                        double beta) const;
    double value_update(const std::vector<Trajectory>& rollouts, double beta);
    TrpoResult generator_update(const std::vector<Trajectory>& rollouts, double beta);

    std::vector<int> evaluate_tasks(int epoch);
    double beta_for_epoch(int epoch) const;

    const ConditionalPolicy& policy() const { return policy_; }
    ConditionalPolicy& policy() { return policy_; }
    const ValueFunction& value_fn() const { return value_; }
    const std::vector<int>& active_tasks() const { return active_tasks_; }

    Checkpoint make_checkpoint(const std::string& prefix = "") const;
    void restore(const Checkpoint& ckpt, const std::string& prefix = "");

  private:
    struct Item; // one featurized generator transition
    std::vector<Item> make_batch(const std::vector<Trajectory>& rollouts) const;
    double head_score(const Item& it) const;
    std::vector<double> rewards_for(const std::vector<Item>& items, double beta) const;
    std::vector<double> advantages_for(const std::vector<Item>& items,
                                       const std::vector<double>& rewards) const;
    double value_step_for(const std::vector<Item>& items, const std::vector<double>& rewards);
    TrpoResult trpo_for(std::vector<Item> items, std::vector<double> advantages);

    TrainConfig cfg_;
    const Env* env_;
    std::vector<std::vector<Trajectory>> experts_; // indexed by active task position
    std::vector<int> active_tasks_;
    std::uint64_t seed_tag_;

    ConditionalPolicy policy_;
    std::optional<AirlDiscriminator> airl_;
    std::optional<PlainDiscriminator> plain_;
    ValueFunction value_;
    std::optional<PosteriorQ> posterior_;
    AdamState disc_adam_;
    AdamState value_adam_;
    std::optional<AdamState> posterior_adam_;

    std::vector<std::vector<DiscSample>> expert_samples_; // per active task position
};

struct TrainResult {
    std::vector<MetricsRecord> metrics;
    Checkpoint checkpoint;
};

/// Algorithm-1 training over the full epoch budget. Deterministic for a fixed
/// config and seed. AirlSingleTask runs one independent instance per task
/// under the same budget and merges the per-task metrics.
TrainResult train(const TrainConfig& cfg, const Env& env,
                  const std::vector<std::vector<Trajectory>>& experts);

/// Rebuilds nets from a checkpoint for evaluation or heatmap export.
ConditionalPolicy policy_from_checkpoint(const Checkpoint& ckpt, const Env& env,
                                         const std::string& prefix = "");
ValueFunction value_from_checkpoint(const Checkpoint& ckpt, const Env& env,
                                    const std::string& prefix = "");
/// Net-name prefix ("" or "t<k>.") for the given task under the checkpoint's
/// variant.
std::string checkpoint_net_prefix(const Checkpoint& ckpt, int task);

/// Deterministic seed mixing for derived RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

} // namespace sgail
