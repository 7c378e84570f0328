#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sgail/models.hpp"

namespace sgail {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Per-parameter Adam moments. One state per optimized vector.
struct AdamState {
    AdamConfig cfg;
    std::vector<double> m, v;
    long t = 0;

    explicit AdamState(int n_params, AdamConfig cfg = {})
        : cfg(cfg), m(n_params, 0.0), v(n_params, 0.0) {}
};

/// One bias-corrected Adam descent step, in place. Throws on length mismatch
/// or a non-finite gradient.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& st);

using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

/// Standard conjugate gradient for SPD operators; returns the best-effort
/// solution after `iters` iterations or once the residual drops below
/// tol * |b|.
std::vector<double> conjugate_gradient(const MatVec& matvec, std::span<const double> b,
                                       int iters, double tol);

struct TrpoConfig {
    double kl_limit = 0.005;
    int cg_iterations = 10;
    double cg_damping = 0.1;
    double line_search_shrink = 0.8;
    int max_backtracks = 10;
    /// Fisher-vector products subsample the batch down to this many samples
    /// (deterministic stride); the line search still validates KL and the
    /// surrogate on the full batch.
    int fvp_batch_cap = 256;

    void validate() const;
};

struct TrpoSample {
    std::vector<double> features;
    std::vector<double> task;
    std::vector<double> action;
    double advantage = 0.0;
};

struct TrpoResult {
    bool accepted = false;
    bool warning = false; // CG/step-size breakdown; params left unchanged
    double kl = 0.0;
    double surrogate_gain = 0.0;
    int backtracks = 0;
};

/// Trust-region policy step: maximizes the importance-ratio surrogate subject
/// to mean KL(pi_old || pi_new) <= kl_limit, via conjugate-gradient natural
/// gradient and backtracking line search. Rejected searches leave the policy
/// parameters bit-identical.
TrpoResult trpo_step(ConditionalPolicy& policy, std::span<const TrpoSample> batch,
                     const TrpoConfig& cfg);

/// Mean KL(old || new) over the batch states for the current policy given
/// frozen old distributions. Exposed for tests.
double mean_kl(const ConditionalPolicy& policy, std::span<const TrpoSample> batch,
               std::span<const ActionDistribution> old_dists);

/// Gradient of mean KL(old || policy) w.r.t. the policy parameters.
std::vector<double> kl_gradient(const ConditionalPolicy& policy,
                                std::span<const TrpoSample> batch,
                                std::span<const ActionDistribution> old_dists);

/// Damped Fisher-vector product (the KL Hessian at the expansion point).
std::vector<double> fisher_vector_product(const ConditionalPolicy& policy,
                                          std::span<const TrpoSample> batch,
                                          std::span<const double> vec, double damping,
                                          int batch_cap = 1 << 30);

} // namespace sgail
