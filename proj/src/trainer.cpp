#include "sgail/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string variant_name(const ModelVariant& v) {
    std::string base;
    switch (v.algo) {
        case Algo::SGail: base = "sgail"; break;
        case Algo::InfoGail: base = "infogail"; break;
        case Algo::InfoGailAirl: base = "infogail-airl"; break;
        case Algo::AirlSingleTask: base = "airl-single"; break;
    }
    return v.erc ? base + "-erc" : base;
}

ModelVariant parse_variant(const std::string& name) {
    ModelVariant v;
    std::string base = name;
    constexpr const char* kErc = "-erc";
    if (base.size() > 4 && base.substr(base.size() - 4) == kErc) {
        v.erc = true;
        base = base.substr(0, base.size() - 4);
    }
    if (base == "sgail")
        v.algo = Algo::SGail;
    else if (base == "infogail")
        v.algo = Algo::InfoGail;
    else if (base == "infogail-airl")
        v.algo = Algo::InfoGailAirl;
    else if (base == "airl-single")
        v.algo = Algo::AirlSingleTask;
    else
        throw std::invalid_argument("unknown variant '" + name + "'");
    return v;
}

void BetaSchedule::validate() const {
    if (start < 0.0 || start > 1.0 || end < 0.0 || end > 1.0)
        throw std::invalid_argument("beta schedule endpoints must lie in [0,1]");
    if (mode == Mode::Constant && start != end)
        throw std::invalid_argument("constant beta schedule requires start == end");
    if (mode == Mode::Linear && span < 1)
        throw std::invalid_argument("linear beta schedule requires span >= 1");
}

double beta_at(const BetaSchedule& schedule, int epoch) {
    if (epoch < 0) throw std::invalid_argument("beta_at: epoch must be >= 0");
    if (schedule.mode == BetaSchedule::Mode::Constant) return schedule.start;
    if (epoch >= schedule.span) return schedule.end;
    return schedule.start +
           (schedule.end - schedule.start) * static_cast<double>(epoch) / schedule.span;
}

void TrainConfig::validate() const {
    beta.validate();
    trpo.validate();
    if (epochs < 1 || episodes_per_epoch < 1 || disc_updates < 1 || value_updates < 1 ||
        eval_interval < 1)
        throw std::invalid_argument("train config counts must be >= 1");
    if (expert_per_task < 1)
        throw std::invalid_argument("train config expert_per_task must be >= 1");
    if (eval_trials < 0) throw std::invalid_argument("eval_trials must be >= 0");
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must lie in [0,1)");
    if (lr_disc <= 0.0 || lr_value <= 0.0)
        throw std::invalid_argument("learning rates must be positive");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("hidden layer sizes must be >= 1");
}

namespace {

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

// loss contributions for one logistic score x = f - log pi (or a plain logit):
//   expert:    -log D       = softplus(-x)
//   generator: -log(1 - D)  = softplus(x)
template <typename Net, typename MakeInput>
DiscLossResult logistic_disc_loss(const Net& net, const MakeInput& make_input,
                                  std::span<const DiscSample> expert,
                                  std::span<const DiscSample> generated, bool airl) {
    if (expert.empty() || generated.empty())
        throw std::invalid_argument("discriminator loss needs nonempty batches");

    DiscLossResult res;
    res.grad.assign(net.param_count(), 0.0);
    Approximator::Workspace ws;
    std::vector<double> out(1);
    double ograd[1];

    const double inv_e = 1.0 / static_cast<double>(expert.size());
    for (const auto& s : expert) {
        auto input = make_input(s);
        net.forward_into(input, out, ws);
        const double x = airl ? out[0] - s.pi_log_prob : out[0];
        res.loss += softplus(-x) * inv_e;
        // d loss / d f = -(1 - D)
        ograd[0] = -(1.0 - logistic(x)) * inv_e;
        net.accumulate_backward(input, ograd, res.grad, ws);
    }
    const double inv_g = 1.0 / static_cast<double>(generated.size());
    for (const auto& s : generated) {
        auto input = make_input(s);
        net.forward_into(input, out, ws);
        const double x = airl ? out[0] - s.pi_log_prob : out[0];
        res.loss += softplus(x) * inv_g;
        // d loss / d f = D
        ograd[0] = logistic(x) * inv_g;
        net.accumulate_backward(input, ograd, res.grad, ws);
    }
    res.objective = -res.loss;
    return res;
}

} // namespace

DiscLossResult airl_discriminator_loss(const AirlDiscriminator& disc,
                                       std::span<const DiscSample> expert,
                                       std::span<const DiscSample> generated) {
    return logistic_disc_loss(
        disc.net(),
        [&](const DiscSample& s) { return disc.make_input(s.features, s.action, s.task); },
        expert, generated, /*airl=*/true);
}

DiscLossResult plain_discriminator_loss(const PlainDiscriminator& disc,
                                        std::span<const DiscSample> expert,
                                        std::span<const DiscSample> generated) {
    return logistic_disc_loss(
        disc.net(), [&](const DiscSample& s) { return disc.make_input(s.features, s.action); },
        expert, generated, /*airl=*/false);
}

double value_regression_step(ValueFunction& value, AdamState& adam,
                             std::span<const ValueSample> batch) {
    if (batch.empty()) throw std::invalid_argument("value regression needs a nonempty batch");
    std::vector<double> grad(value.net().param_count(), 0.0);
    Approximator::Workspace ws;
    std::vector<double> out(1);
    double ograd[1];
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (const auto& s : batch) {
        auto input = value.make_input(s.features, s.task);
        value.net().forward_into(input, out, ws);
        const double err = out[0] - s.target;
        loss += err * err * inv_n;
        ograd[0] = 2.0 * err * inv_n;
        value.net().accumulate_backward(input, ograd, grad, ws);
    }
    auto params = value.net().get_params();
    adam_step(params, grad, adam);
    value.net().set_params(params);
    return loss;
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma) {
    std::vector<double> g(rewards.size());
    double acc = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        acc = rewards[i] + gamma * acc;
        g[i] = acc;
    }
    return g;
}

double mi_lower_bound(std::span<const QSample> samples, const PosteriorQ& q,
                      int n_active_tasks) {
    if (samples.empty()) throw std::invalid_argument("mi_lower_bound needs samples");
    if (n_active_tasks < 1) throw std::invalid_argument("mi_lower_bound needs >= 1 task");
    double mean_log_q = 0.0;
    for (const auto& s : samples)
        mean_log_q += q.log_q(s.features, s.action).at(s.task_index);
    mean_log_q /= static_cast<double>(samples.size());
    return mean_log_q + std::log(static_cast<double>(n_active_tasks));
}

struct Trainer::Item {
    std::vector<double> feat_s;
    std::vector<double> action;
    std::vector<double> task;
    std::vector<double> feat_next;
    double logp = 0.0;
    double logp_clamped = 0.0;
    int traj = 0;
    bool last = false;
    int task_index = 0;
};

Trainer::Trainer(TrainConfig cfg, const Env& env, std::vector<std::vector<Trajectory>> experts,
                 std::vector<int> active_tasks, std::uint64_t seed_tag)
    : cfg_(std::move(cfg)), env_(&env), experts_(std::move(experts)),
      active_tasks_(std::move(active_tasks)), seed_tag_(seed_tag),
      policy_(env.discrete_actions()
                  ? ConditionalPolicy::categorical(env.feature_dim(), env.task_dim(),
                                                   env.action_dim(), cfg_.hidden,
                                                   cfg_.variant.policy_task_input(),
                                                   mix_seed(cfg_.seed, seed_tag_ * 101 + 1))
                  : ConditionalPolicy::gaussian(env.feature_dim(), env.task_dim(),
                                                env.action_dim(), cfg_.hidden,
                                                cfg_.variant.policy_task_input(),
                                                mix_seed(cfg_.seed, seed_tag_ * 101 + 1),
                                                cfg_.gaussian_log_std_init)),
      value_(env.feature_dim(), env.task_dim(), cfg_.hidden, cfg_.variant.value_task_input(),
             mix_seed(cfg_.seed, seed_tag_ * 101 + 3)),
      disc_adam_(0), value_adam_(value_.net().param_count(), {cfg_.lr_value}) {
    cfg_.validate();
    if (experts_.size() != active_tasks_.size())
        throw std::invalid_argument("trainer: one expert set per active task required");
    for (const auto& set : experts_)
        if (set.empty()) throw std::invalid_argument("trainer: missing expert data for a task");

    const std::uint64_t disc_seed = mix_seed(cfg_.seed, seed_tag_ * 101 + 2);
    if (cfg_.variant.uses_airl_head()) {
        airl_.emplace(env.feature_dim(), env.action_dim(), env.task_dim(), cfg_.hidden,
                      cfg_.variant.disc_task_input(), disc_seed);
        disc_adam_ = AdamState(airl_->net().param_count(), {cfg_.lr_disc});
    } else {
        plain_.emplace(env.feature_dim(), env.action_dim(), cfg_.hidden, disc_seed);
        disc_adam_ = AdamState(plain_->net().param_count(), {cfg_.lr_disc});
    }
    if (cfg_.variant.uses_posterior()) {
        posterior_.emplace(env.feature_dim(), env.action_dim(), env.task_dim(), cfg_.hidden,
                           mix_seed(cfg_.seed, seed_tag_ * 101 + 4));
        posterior_adam_.emplace(posterior_->net().param_count(), AdamConfig{cfg_.lr_disc});
    }

    // Featurize the demonstrations once; policy likelihoods are recomputed
    // every epoch.
    expert_samples_.resize(experts_.size());
    for (std::size_t p = 0; p < experts_.size(); ++p) {
        for (const auto& traj : experts_[p]) {
            traj.validate();
            for (const auto& step : traj.steps) {
                DiscSample s;
                s.features = env.featurize(step.state);
                s.action = step.action;
                s.task = traj.task.onehot;
                expert_samples_[p].push_back(std::move(s));
            }
        }
        if (expert_samples_[p].empty())
            throw std::invalid_argument("trainer: expert trajectories contain no transitions");
    }
}

double Trainer::beta_for_epoch(int epoch) const {
    return cfg_.variant.erc ? beta_at(cfg_.beta, epoch) : 0.0;
}

std::vector<Trajectory> Trainer::collect_rollouts(int epoch) {
    std::vector<Trajectory> rollouts;
    rollouts.reserve(cfg_.episodes_per_epoch);
    auto policy_fn = policy_.as_policy();
    for (int e = 0; e < cfg_.episodes_per_epoch; ++e) {
        const int task = active_tasks_[e % active_tasks_.size()];
        const std::uint64_t seed =
            mix_seed(mix_seed(cfg_.seed, seed_tag_ * 7919 + 11),
                     static_cast<std::uint64_t>(epoch) * cfg_.episodes_per_epoch + e);
        rollouts.push_back(rollout(*env_, policy_fn, task, seed));
    }
    return rollouts;
}

std::vector<Trainer::Item> Trainer::make_batch(const std::vector<Trajectory>& rollouts) const {
    std::vector<Item> items;
    for (std::size_t r = 0; r < rollouts.size(); ++r) {
        const auto& traj = rollouts[r];
        for (std::size_t t = 0; t < traj.steps.size(); ++t) {
            const auto& step = traj.steps[t];
            Item it;
            it.feat_s = env_->featurize(step.state);
            it.action = step.action;
            it.task = traj.task.onehot;
            it.feat_next = env_->featurize(step.next_state);
            auto dist = policy_.distribution(it.feat_s, it.task);
            it.logp = dist.log_prob(it.action);
            it.logp_clamped = dist.log_prob_clamped(it.action, kLogProbFloorPerDim);
            it.traj = static_cast<int>(r);
            it.last = (t + 1 == traj.steps.size());
            it.task_index = traj.task.index();
            items.push_back(std::move(it));
        }
    }
    return items;
}

double Trainer::head_score(const Item& it) const {
    return airl_ ? airl_->f(it.feat_s, it.action, it.task)
                 : plain_->logit(it.feat_s, it.action);
}

double Trainer::discriminator_update(const std::vector<Trajectory>& rollouts) {
    auto items = make_batch(rollouts);
    if (items.empty()) return 0.0;

    std::vector<DiscSample> gen;
    gen.reserve(items.size());
    for (auto& it : items)
        gen.push_back({it.feat_s, it.action, it.task, it.logp});

    std::vector<DiscSample> expert;
    for (std::size_t p = 0; p < expert_samples_.size(); ++p)
        for (const auto& s : expert_samples_[p]) expert.push_back(s);
    if (airl_) {
        for (auto& s : expert)
            s.pi_log_prob = policy_.distribution(s.features, s.task).log_prob(s.action);
    }

    double loss = 0.0;
    for (int u = 0; u < cfg_.disc_updates; ++u) {
        DiscLossResult res = airl_ ? airl_discriminator_loss(*airl_, expert, gen)
                                   : plain_discriminator_loss(*plain_, expert, gen);
        Approximator& net = airl_ ? airl_->net() : plain_->net();
        auto params = net.get_params();
        adam_step(params, res.grad, disc_adam_);
        net.set_params(params);
        loss = res.loss;
    }
    return loss;
}

double Trainer::posterior_update(const std::vector<Trajectory>& rollouts) {
    if (!posterior_) return 0.0;
    auto items = make_batch(rollouts);
    if (items.empty()) return 0.0;

    std::vector<double> grad(posterior_->net().param_count(), 0.0);
    Approximator::Workspace ws;
    const int codes = posterior_->n_codes();
    std::vector<double> out(codes), ograd(codes);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(items.size());
    for (const auto& it : items) {
        auto input = posterior_->make_input(it.feat_s, it.action);
        posterior_->net().forward_into(input, out, ws);
        const double p = std::max(out[it.task_index], 1e-12);
        loss += -std::log(p) * inv_n;
        std::fill(ograd.begin(), ograd.end(), 0.0);
        ograd[it.task_index] = -inv_n / p;
        posterior_->net().accumulate_backward(input, ograd, grad, ws);
    }
    auto params = posterior_->net().get_params();
    adam_step(params, grad, *posterior_adam_);
    posterior_->net().set_params(params);
    return loss;
}

std::vector<double> Trainer::rewards_for(const std::vector<Item>& items, double beta) const {
    std::vector<double> rewards(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        double r = pseudo_reward(head_score(items[i]), items[i].logp_clamped, beta);
        if (posterior_)
            r += cfg_.variant.info_lambda2 *
                 posterior_->log_q(items[i].feat_s, items[i].action).at(items[i].task_index);
        rewards[i] = r;
    }
    return rewards;
}

std::vector<double> Trainer::advantages_for(const std::vector<Item>& items,
                                            const std::vector<double>& rewards) const {
    std::vector<double> adv(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double v_s = value_.value(items[i].feat_s, items[i].task);
        const double v_next =
            items[i].last ? 0.0 : value_.value(items[i].feat_next, items[i].task);
        adv[i] = advantage(rewards[i], v_s, v_next, cfg_.gamma, items[i].last);
    }
    return adv;
}

double Trainer::value_step_for(const std::vector<Item>& items,
                               const std::vector<double>& rewards) {
    if (items.empty()) return 0.0;
    // Regression targets: discounted return-to-go of the pseudorewards along
    // each sampled trajectory.
    std::vector<std::vector<double>> per_traj;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].traj >= static_cast<int>(per_traj.size()))
            per_traj.resize(items[i].traj + 1);
        per_traj[items[i].traj].push_back(rewards[i]);
    }
    std::vector<std::vector<double>> returns(per_traj.size());
    for (std::size_t r = 0; r < per_traj.size(); ++r)
        returns[r] = discounted_returns(per_traj[r], cfg_.gamma);

    std::vector<std::size_t> cursor(per_traj.size(), 0);
    std::vector<ValueSample> batch;
    batch.reserve(items.size());
    for (const auto& it : items)
        batch.push_back({it.feat_s, it.task, returns[it.traj][cursor[it.traj]++]});
    double loss = 0.0;
    for (int u = 0; u < cfg_.value_updates; ++u)
        loss = value_regression_step(value_, value_adam_, batch);
    return loss;
}

TrpoResult Trainer::trpo_for(std::vector<Item> items, std::vector<double> adv) {
    if (items.empty()) return {};
    double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / adv.size();
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / adv.size());
    for (double& a : adv) a = (a - mean) / (sd + 1e-8);

    std::vector<TrpoSample> batch(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        batch[i] = {std::move(items[i].feat_s), std::move(items[i].task),
                    std::move(items[i].action), adv[i]};
    return trpo_step(policy_, batch, cfg_.trpo);
}

std::vector<std::vector<double>> Trainer::transition_rewards(
    const std::vector<Trajectory>& rollouts, double beta) const {
    auto items = make_batch(rollouts);
    auto flat = rewards_for(items, beta);
    std::vector<std::vector<double>> rewards(rollouts.size());
    for (std::size_t i = 0; i < items.size(); ++i) rewards[items[i].traj].push_back(flat[i]);
    return rewards;
}

double Trainer::value_update(const std::vector<Trajectory>& rollouts, double beta) {
    auto items = make_batch(rollouts);
    auto rewards = rewards_for(items, beta);
    return value_step_for(items, rewards);
}

TrpoResult Trainer::generator_update(const std::vector<Trajectory>& rollouts, double beta) {
    auto items = make_batch(rollouts);
    if (items.empty()) return {};
    auto rewards = rewards_for(items, beta);
    auto adv = advantages_for(items, rewards);
    return trpo_for(std::move(items), std::move(adv));
}

Trainer::EpochStats Trainer::run_epoch(int epoch) {
    EpochStats stats;
    stats.beta = beta_for_epoch(epoch);
    auto rollouts = collect_rollouts(epoch);

    stats.d_loss = discriminator_update(rollouts);
    stats.d_objective = -stats.d_loss;
    posterior_update(rollouts);

    auto items = make_batch(rollouts);
    if (items.empty()) return stats;
    auto rewards = rewards_for(items, stats.beta);
    // Advantages bootstrap from the value function as it stood entering the
    // epoch, even though its regression step runs first below.
    auto adv = advantages_for(items, rewards);
    stats.v_loss = value_step_for(items, rewards);
    TrpoResult trpo = trpo_for(std::move(items), std::move(adv));
    stats.surrogate_gain = trpo.surrogate_gain;
    stats.trpo_accepted = trpo.accepted;
    return stats;
}

std::vector<int> Trainer::evaluate_tasks(int epoch) {
    std::vector<int> successes;
    auto greedy = policy_.as_greedy_policy();
    for (std::size_t p = 0; p < active_tasks_.size(); ++p) {
        const int task = active_tasks_[p];
        const std::uint64_t seed =
            mix_seed(mix_seed(cfg_.seed, seed_tag_ * 7919 + 23),
                     static_cast<std::uint64_t>(epoch) * 64 + task);
        if (cfg_.eval_sweep)
            successes.push_back(evaluate_sweep(*env_, greedy, task, seed, true).first);
        else
            successes.push_back(evaluate(*env_, greedy, task, cfg_.eval_trials, seed, true));
    }
    return successes;
}

namespace {

void add_net(Checkpoint& ckpt, const std::string& name, const Approximator& net,
             std::map<std::string, std::vector<double>> extras = {}) {
    ckpt.nets.push_back({name, net.spec(), net.get_params(), std::move(extras)});
}

} // namespace

Checkpoint Trainer::make_checkpoint(const std::string& prefix) const {
    Checkpoint ckpt;
    std::map<std::string, std::vector<double>> policy_extras;
    if (policy_.kind() == ActionDistribution::Kind::Gaussian)
        policy_extras["log_std"] = {policy_.log_std().begin(), policy_.log_std().end()};
    add_net(ckpt, prefix + "policy", policy_.net(), std::move(policy_extras));
    if (airl_)
        add_net(ckpt, prefix + "discriminator", airl_->net());
    else
        add_net(ckpt, prefix + "discriminator", plain_->net());
    add_net(ckpt, prefix + "value", value_.net());
    if (posterior_) add_net(ckpt, prefix + "posterior", posterior_->net());
    return ckpt;
}

void Trainer::restore(const Checkpoint& ckpt, const std::string& prefix) {
    const auto& pol = ckpt.net(prefix + "policy");
    policy_.net().set_params(pol.params);
    if (policy_.kind() == ActionDistribution::Kind::Gaussian) {
        auto it = pol.extras.find("log_std");
        if (it == pol.extras.end())
            throw std::runtime_error("checkpoint policy is missing log_std");
        auto full = policy_.net().get_params();
        full.insert(full.end(), it->second.begin(), it->second.end());
        policy_.set_params(full);
    }
    if (airl_)
        airl_->net().set_params(ckpt.net(prefix + "discriminator").params);
    else
        plain_->net().set_params(ckpt.net(prefix + "discriminator").params);
    value_.net().set_params(ckpt.net(prefix + "value").params);
    if (posterior_) posterior_->net().set_params(ckpt.net(prefix + "posterior").params);
}

namespace {

MetricsRecord make_record(int epoch, double beta, double d_loss, double v_loss,
                          double surrogate_gain, std::vector<int> success) {
    MetricsRecord rec;
    rec.epoch = epoch;
    rec.beta = beta;
    rec.d_loss = d_loss;
    rec.v_loss = v_loss;
    rec.surrogate_gain = surrogate_gain;
    rec.success = std::move(success);
    return rec;
}

} // namespace

TrainResult train(const TrainConfig& cfg, const Env& env,
                  const std::vector<std::vector<Trajectory>>& experts) {
    cfg.validate();
    const int n_tasks = env.num_tasks();
    if (static_cast<int>(experts.size()) < n_tasks)
        throw std::invalid_argument("train: one expert set per task required");
    for (int t = 0; t < n_tasks; ++t)
        if (experts[t].empty())
            throw std::invalid_argument("train: missing expert data for task " +
                                        std::to_string(t));

    TrainResult result;
    auto eval_epoch = [&](int epoch) {
        return epoch % cfg.eval_interval == 0 || epoch == cfg.epochs - 1;
    };

    if (cfg.variant.algo == Algo::AirlSingleTask) {
        std::vector<std::unique_ptr<Trainer>> instances;
        for (int t = 0; t < n_tasks; ++t)
            instances.push_back(std::make_unique<Trainer>(
                cfg, env, std::vector<std::vector<Trajectory>>{experts[t]},
                std::vector<int>{t}, /*seed_tag=*/100 + t));
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            double d_loss = 0.0, v_loss = 0.0, gain = 0.0, beta = 0.0;
            for (auto& inst : instances) {
                auto stats = inst->run_epoch(epoch);
                d_loss += stats.d_loss / n_tasks;
                v_loss += stats.v_loss / n_tasks;
                gain += stats.surrogate_gain / n_tasks;
                beta = stats.beta;
            }
            if (eval_epoch(epoch)) {
                std::vector<int> success(n_tasks, 0);
                for (int t = 0; t < n_tasks; ++t)
                    success[t] = instances[t]->evaluate_tasks(epoch)[0];
                result.metrics.push_back(
                    make_record(epoch, beta, d_loss, v_loss, gain, std::move(success)));
            }
        }
        for (int t = 0; t < n_tasks; ++t) {
            auto part = instances[t]->make_checkpoint("t" + std::to_string(t) + ".");
            for (auto& net : part.nets) result.checkpoint.nets.push_back(std::move(net));
        }
    } else {
        std::vector<int> active(n_tasks);
        std::iota(active.begin(), active.end(), 0);
        Trainer trainer(cfg, env, {experts.begin(), experts.begin() + n_tasks}, active);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            auto stats = trainer.run_epoch(epoch);
            if (eval_epoch(epoch))
                result.metrics.push_back(make_record(epoch, stats.beta, stats.d_loss,
                                                     stats.v_loss, stats.surrogate_gain,
                                                     trainer.evaluate_tasks(epoch)));
        }
        result.checkpoint = trainer.make_checkpoint();
    }

    result.checkpoint.meta["env"] = env.id();
    result.checkpoint.meta["variant"] = variant_name(cfg.variant);
    result.checkpoint.meta["tasks"] = std::to_string(n_tasks);
    result.checkpoint.meta["task_dim"] = std::to_string(env.task_dim());
    result.checkpoint.meta["gamma"] = std::to_string(cfg.gamma);
    result.checkpoint.meta["seed"] = std::to_string(cfg.seed);
    return result;
}

std::string checkpoint_net_prefix(const Checkpoint& ckpt, int task) {
    if (ckpt.has_net("policy")) return "";
    return "t" + std::to_string(task) + ".";
}

ConditionalPolicy policy_from_checkpoint(const Checkpoint& ckpt, const Env& env,
                                         const std::string& prefix) {
    const auto& entry = ckpt.net(prefix + "policy");
    const bool task_input = entry.spec.input_dim == env.feature_dim() + env.task_dim();
    std::vector<int> hidden = entry.spec.hidden_layers;
    const bool gaussian = entry.extras.count("log_std") > 0;
    ConditionalPolicy policy =
        gaussian ? ConditionalPolicy::gaussian(env.feature_dim(), env.task_dim(),
                                               env.action_dim(), hidden, task_input, 0, 0.0)
                 : ConditionalPolicy::categorical(env.feature_dim(), env.task_dim(),
                                                  env.action_dim(), hidden, task_input, 0);
    std::vector<double> full = entry.params;
    if (gaussian) {
        const auto& ls = entry.extras.at("log_std");
        full.insert(full.end(), ls.begin(), ls.end());
    }
    policy.set_params(full);
    return policy;
}

ValueFunction value_from_checkpoint(const Checkpoint& ckpt, const Env& env,
                                    const std::string& prefix) {
    const auto& entry = ckpt.net(prefix + "value");
    const bool task_input = entry.spec.input_dim == env.feature_dim() + env.task_dim();
    ValueFunction value(env.feature_dim(), env.task_dim(), entry.spec.hidden_layers,
                        task_input, 0);
    value.net().set_params(entry.params);
    return value;
}

} // namespace sgail
