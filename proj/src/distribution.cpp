#include "sgail/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgail/approximator.hpp"
#include "sgail/grid_world.hpp"

namespace sgail {

ActionDistribution ActionDistribution::categorical(std::vector<double> logits) {
    if (logits.size() < 2) throw std::invalid_argument("categorical needs >= 2 logits");
    ActionDistribution d;
    d.kind = Kind::Categorical;
    d.probs = logits;
    softmax_inplace(d.probs);
    d.logits = std::move(logits);
    return d;
}

ActionDistribution ActionDistribution::point_mass(int index, int dim) {
    if (index < 0 || index >= dim) throw std::invalid_argument("point mass index out of range");
    std::vector<double> logits(dim, -1e9);
    logits[index] = 0.0;
    return categorical(std::move(logits));
}

ActionDistribution ActionDistribution::gaussian(std::vector<double> mean,
                                                std::vector<double> log_std) {
    if (mean.size() != log_std.size() || mean.empty())
        throw std::invalid_argument("gaussian mean/log_std size mismatch");
    ActionDistribution d;
    d.kind = Kind::Gaussian;
    d.mean = std::move(mean);
    d.log_std = std::move(log_std);
    return d;
}

int ActionDistribution::action_dim() const {
    return kind == Kind::Categorical ? static_cast<int>(probs.size())
                                     : static_cast<int>(mean.size());
}

void ActionDistribution::validate() const {
    if (kind == Kind::Categorical) {
        if (probs.empty()) throw std::invalid_argument("categorical has no probabilities");
        double sum = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("categorical probability out of range");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("categorical probabilities must sum to 1");
    } else {
        for (double s : log_std)
            if (!std::isfinite(s)) throw std::invalid_argument("gaussian log_std not finite");
        for (double m : mean)
            if (!std::isfinite(m)) throw std::invalid_argument("gaussian mean not finite");
    }
}

static constexpr double kHalfLog2Pi = 0.9189385332046727; // 0.5 * log(2*pi)

double ActionDistribution::log_prob(std::span<const double> action) const {
    if (kind == Kind::Categorical) {
        const int a = action_index(action);
        if (a >= static_cast<int>(logits.size()))
            throw std::invalid_argument("action index out of range");
        return logits[a] - log_sum_exp(logits);
    }
    if (action.size() != mean.size()) throw std::invalid_argument("action dimension mismatch");
    double lp = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double sd = std::exp(log_std[i]);
        const double z = (action[i] - mean[i]) / sd;
        lp += -0.5 * z * z - log_std[i] - kHalfLog2Pi;
    }
    return lp;
}

double ActionDistribution::log_prob_clamped(std::span<const double> action,
                                            double floor_per_dim) const {
    if (kind == Kind::Categorical) return log_prob(action);
    if (action.size() != mean.size()) throw std::invalid_argument("action dimension mismatch");
    double lp = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double sd = std::exp(log_std[i]);
        const double z = (action[i] - mean[i]) / sd;
        lp += std::max(-0.5 * z * z - log_std[i] - kHalfLog2Pi, floor_per_dim);
    }
    return lp;
}

std::vector<double> ActionDistribution::sample(std::mt19937_64& rng) const {
    if (kind == Kind::Categorical) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(rng);
        double acc = 0.0;
        int a = static_cast<int>(probs.size()) - 1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) {
                a = static_cast<int>(i);
                break;
            }
        }
        return action_onehot(a, static_cast<int>(probs.size()));
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i)
        a[i] = mean[i] + std::exp(log_std[i]) * normal(rng);
    return a;
}

std::vector<double> ActionDistribution::greedy() const {
    if (kind == Kind::Categorical) {
        const int a = static_cast<int>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        return action_onehot(a, static_cast<int>(probs.size()));
    }
    return mean;
}

} // namespace sgail
