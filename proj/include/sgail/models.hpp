#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgail/approximator.hpp"
#include "sgail/distribution.hpp"
#include "sgail/env.hpp"

namespace sgail {

/// Gaussian per-dimension log-probability floor applied before rewards.
constexpr double kLogProbFloorPerDim = -20.0;

/// Task-conditioned policy head. Categorical policies map
/// (features [+ task]) to logits; Gaussian policies map to the action mean
/// and keep a learned state-independent log-stddev vector. The flat parameter
/// view is net params followed by the log-stddev entries.
class ConditionalPolicy {
  public:
    static ConditionalPolicy categorical(int feature_dim, int task_dim, int n_actions,
                                         std::span<const int> hidden, bool task_input,
                                         std::uint64_t init_seed);
    static ConditionalPolicy gaussian(int feature_dim, int task_dim, int action_dim,
                                      std::span<const int> hidden, bool task_input,
                                      std::uint64_t init_seed, double log_std_init);

    ActionDistribution::Kind kind() const { return kind_; }
    bool task_input() const { return task_input_; }
    int action_dim() const { return action_dim_; }
    const Approximator& net() const { return net_; }
    Approximator& net() { return net_; }
    std::span<const double> log_std() const { return log_std_; }

    ActionDistribution distribution(std::span<const double> features,
                                    std::span<const double> task) const;
    std::vector<double> make_input(std::span<const double> features,
                                   std::span<const double> task) const;

    int param_count() const { return net_.param_count() + static_cast<int>(log_std_.size()); }
    std::vector<double> get_params() const;
    void set_params(std::span<const double> p);

    /// Rollout adapter; the policy must outlive the returned callable.
    PolicyFn as_policy() const;
    PolicyFn as_greedy_policy() const;

  private:
    Approximator net_;
    std::vector<double> log_std_;
    ActionDistribution::Kind kind_ = ActionDistribution::Kind::Categorical;
    bool task_input_ = true;
    int feature_dim_ = 0, task_dim_ = 0, action_dim_ = 0;

    ConditionalPolicy(Approximator net, bool task_input, int feature_dim, int task_dim,
                      int action_dim)
        : net_(std::move(net)), task_input_(task_input), feature_dim_(feature_dim),
          task_dim_(task_dim), action_dim_(action_dim) {}
};

/// AIRL-structured head: f(s, a [, c]) combined with the policy likelihood
/// through the odds ratio D = exp(f) / (exp(f) + pi).
class AirlDiscriminator {
  public:
    AirlDiscriminator(int feature_dim, int action_dim, int task_dim,
                      std::span<const int> hidden, bool task_input, std::uint64_t init_seed);

    bool task_input() const { return task_input_; }
    const Approximator& net() const { return f_net_; }
    Approximator& net() { return f_net_; }

    double f(std::span<const double> features, std::span<const double> action,
             std::span<const double> task) const;
    std::vector<double> make_input(std::span<const double> features,
                                   std::span<const double> action,
                                   std::span<const double> task) const;

  private:
    Approximator f_net_;
    bool task_input_;
};

/// Plain logistic discriminator over (s, a); the baseline head for InfoGAIL,
/// which never sees the task variable.
class PlainDiscriminator {
  public:
    PlainDiscriminator(int feature_dim, int action_dim, std::span<const int> hidden,
                       std::uint64_t init_seed);

    const Approximator& net() const { return net_; }
    Approximator& net() { return net_; }

    double logit(std::span<const double> features, std::span<const double> action) const;
    double probability(std::span<const double> features, std::span<const double> action) const;
    std::vector<double> make_input(std::span<const double> features,
                                   std::span<const double> action) const;

  private:
    Approximator net_;
};

class ValueFunction {
  public:
    ValueFunction(int feature_dim, int task_dim, std::span<const int> hidden, bool task_input,
                  std::uint64_t init_seed);

    bool task_input() const { return task_input_; }
    const Approximator& net() const { return net_; }
    Approximator& net() { return net_; }

    double value(std::span<const double> features, std::span<const double> task) const;
    std::vector<double> make_input(std::span<const double> features,
                                   std::span<const double> task) const;

  private:
    Approximator net_;
    bool task_input_;
};

/// Variational posterior over task codes given (s, a); softmax head.
class PosteriorQ {
  public:
    PosteriorQ(int feature_dim, int action_dim, int n_codes, std::span<const int> hidden,
               std::uint64_t init_seed);

    int n_codes() const { return net_.spec().output_dim; }
    const Approximator& net() const { return net_; }
    Approximator& net() { return net_; }

    std::vector<double> log_q(std::span<const double> features,
                              std::span<const double> action) const;
    std::vector<double> make_input(std::span<const double> features,
                                   std::span<const double> action) const;

  private:
    Approximator net_;
};

/// D = exp(f) / (exp(f) + pi), computed as logistic(f - log pi).
double airl_d(double f, double pi_log_prob);

/// log D - log(1 - D) + beta * log pi, through the closed form
/// f - (1 - beta) * log pi.
double pseudo_reward(double f, double pi_log_prob, double beta);

/// reward + gamma * V(s') - V(s), with V(s') = 0 on terminal transitions.
double advantage(double reward, double v_s, double v_next, double gamma, bool terminal);

double logistic(double x);

} // namespace sgail
