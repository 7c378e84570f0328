#pragma once

#include <random>
#include <span>
#include <vector>

namespace sgail {

/// Action distribution returned by a conditional policy: either a categorical
/// over one-hot actions or a diagonal Gaussian over continuous actions.
struct ActionDistribution {
    enum class Kind { Categorical, Gaussian };

    Kind kind = Kind::Categorical;
    std::vector<double> logits;  // categorical, raw
    std::vector<double> probs;   // categorical, softmax of logits
    std::vector<double> mean;    // gaussian
    std::vector<double> log_std; // gaussian, state-independent

    static ActionDistribution categorical(std::vector<double> logits);
    static ActionDistribution point_mass(int index, int dim);
    static ActionDistribution gaussian(std::vector<double> mean, std::vector<double> log_std);

    int action_dim() const;
    /// Categorical actions are one-hot vectors; Gaussian actions raw values.
    double log_prob(std::span<const double> action) const;
    /// log_prob with each Gaussian per-dimension term clamped below at
    /// `floor_per_dim`; categorical is unaffected.
    double log_prob_clamped(std::span<const double> action, double floor_per_dim) const;
    std::vector<double> sample(std::mt19937_64& rng) const;
    /// Argmax action (categorical) or the mean (Gaussian).
    std::vector<double> greedy() const;

    void validate() const;
};

} // namespace sgail
