#include "sgail/models.hpp"

#include <cmath>
#include <stdexcept>

namespace sgail {

namespace {

ApproximatorSpec dense_spec(int input_dim, std::span<const int> hidden, int output_dim,
                            OutputHead head = OutputHead::Linear) {
    ApproximatorSpec spec;
    spec.input_dim = input_dim;
    spec.hidden_layers.assign(hidden.begin(), hidden.end());
    spec.output_dim = output_dim;
    spec.output_head = head;
    return spec;
}

std::vector<double> concat2(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<double> concat3(std::span<const double> a, std::span<const double> b,
                            std::span<const double> c) {
    std::vector<double> out;
    out.reserve(a.size() + b.size() + c.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

} // namespace

ConditionalPolicy ConditionalPolicy::categorical(int feature_dim, int task_dim, int n_actions,
                                                 std::span<const int> hidden, bool task_input,
                                                 std::uint64_t init_seed) {
    const int in = feature_dim + (task_input ? task_dim : 0);
    ConditionalPolicy p(Approximator(dense_spec(in, hidden, n_actions), init_seed), task_input,
                        feature_dim, task_dim, n_actions);
    p.kind_ = ActionDistribution::Kind::Categorical;
    return p;
}

ConditionalPolicy ConditionalPolicy::gaussian(int feature_dim, int task_dim, int action_dim,
                                              std::span<const int> hidden, bool task_input,
                                              std::uint64_t init_seed, double log_std_init) {
    const int in = feature_dim + (task_input ? task_dim : 0);
    ConditionalPolicy p(Approximator(dense_spec(in, hidden, action_dim), init_seed), task_input,
                        feature_dim, task_dim, action_dim);
    p.kind_ = ActionDistribution::Kind::Gaussian;
    p.log_std_.assign(action_dim, log_std_init);
    return p;
}

std::vector<double> ConditionalPolicy::make_input(std::span<const double> features,
                                                  std::span<const double> task) const {
    return task_input_ ? concat2(features, task)
                       : std::vector<double>(features.begin(), features.end());
}

ActionDistribution ConditionalPolicy::distribution(std::span<const double> features,
                                                   std::span<const double> task) const {
    auto out = net_.forward(make_input(features, task));
    if (kind_ == ActionDistribution::Kind::Categorical)
        return ActionDistribution::categorical(std::move(out));
    return ActionDistribution::gaussian(std::move(out), log_std_);
}

std::vector<double> ConditionalPolicy::get_params() const {
    auto p = net_.get_params();
    p.insert(p.end(), log_std_.begin(), log_std_.end());
    return p;
}

void ConditionalPolicy::set_params(std::span<const double> p) {
    if (static_cast<int>(p.size()) != param_count())
        throw std::invalid_argument("policy param vector length mismatch");
    net_.set_params(p.subspan(0, net_.param_count()));
    std::copy(p.begin() + net_.param_count(), p.end(), log_std_.begin());
}

PolicyFn ConditionalPolicy::as_policy() const {
    return [this](std::span<const double> features, std::span<const double> task) {
        return distribution(features, task);
    };
}

PolicyFn ConditionalPolicy::as_greedy_policy() const {
    return [this](std::span<const double> features, std::span<const double> task) {
        auto d = distribution(features, task);
        if (d.kind == ActionDistribution::Kind::Categorical) {
            auto a = d.greedy();
            return ActionDistribution::point_mass(action_index(a),
                                                  static_cast<int>(a.size()));
        }
        return ActionDistribution::gaussian(d.mean, std::vector<double>(d.mean.size(), -30.0));
    };
}

AirlDiscriminator::AirlDiscriminator(int feature_dim, int action_dim, int task_dim,
                                     std::span<const int> hidden, bool task_input,
                                     std::uint64_t init_seed)
    : f_net_(dense_spec(feature_dim + action_dim + (task_input ? task_dim : 0), hidden, 1),
             init_seed),
      task_input_(task_input) {}

std::vector<double> AirlDiscriminator::make_input(std::span<const double> features,
                                                  std::span<const double> action,
                                                  std::span<const double> task) const {
    return task_input_ ? concat3(features, action, task) : concat2(features, action);
}

double AirlDiscriminator::f(std::span<const double> features, std::span<const double> action,
                            std::span<const double> task) const {
    return f_net_.forward(make_input(features, action, task))[0];
}

PlainDiscriminator::PlainDiscriminator(int feature_dim, int action_dim,
                                       std::span<const int> hidden, std::uint64_t init_seed)
    : net_(dense_spec(feature_dim + action_dim, hidden, 1), init_seed) {}

std::vector<double> PlainDiscriminator::make_input(std::span<const double> features,
                                                   std::span<const double> action) const {
    return concat2(features, action);
}

double PlainDiscriminator::logit(std::span<const double> features,
                                 std::span<const double> action) const {
    return net_.forward(make_input(features, action))[0];
}

double PlainDiscriminator::probability(std::span<const double> features,
                                       std::span<const double> action) const {
    return logistic(logit(features, action));
}

ValueFunction::ValueFunction(int feature_dim, int task_dim, std::span<const int> hidden,
                             bool task_input, std::uint64_t init_seed)
    : net_(dense_spec(feature_dim + (task_input ? task_dim : 0), hidden, 1), init_seed),
      task_input_(task_input) {}

std::vector<double> ValueFunction::make_input(std::span<const double> features,
                                              std::span<const double> task) const {
    return task_input_ ? concat2(features, task)
                       : std::vector<double>(features.begin(), features.end());
}

double ValueFunction::value(std::span<const double> features, std::span<const double> task) const {
    return net_.forward(make_input(features, task))[0];
}

PosteriorQ::PosteriorQ(int feature_dim, int action_dim, int n_codes,
                       std::span<const int> hidden, std::uint64_t init_seed)
    : net_(dense_spec(feature_dim + action_dim, hidden, n_codes, OutputHead::Softmax),
           init_seed) {}

std::vector<double> PosteriorQ::make_input(std::span<const double> features,
                                           std::span<const double> action) const {
    return concat2(features, action);
}

std::vector<double> PosteriorQ::log_q(std::span<const double> features,
                                      std::span<const double> action) const {
    auto p = net_.forward(make_input(features, action));
    for (double& v : p) v = std::log(v);
    return p;
}

double logistic(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double airl_d(double f, double pi_log_prob) {
    if (!std::isfinite(f)) throw std::invalid_argument("airl_d: f must be finite");
    if (!std::isfinite(pi_log_prob))
        throw std::invalid_argument("airl_d: log pi must be finite");
    return logistic(f - pi_log_prob);
}

double pseudo_reward(double f, double pi_log_prob, double beta) {
    return f - (1.0 - beta) * pi_log_prob;
}

double advantage(double reward, double v_s, double v_next, double gamma, bool terminal) {
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must lie in [0,1)");
    return reward + (terminal ? 0.0 : gamma * v_next) - v_s;
}

} // namespace sgail
