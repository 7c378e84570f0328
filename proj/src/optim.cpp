#include "sgail/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgail {

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& st) {
    if (params.size() != grad.size() || params.size() != st.m.size())
        throw std::invalid_argument("adam_step: length mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");

    st.t += 1;
    const double b1 = st.cfg.beta1, b2 = st.cfg.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        st.m[i] = b1 * st.m[i] + (1.0 - b1) * grad[i];
        st.v[i] = b2 * st.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = st.m[i] / bc1;
        const double vhat = st.v[i] / bc2;
        params[i] -= st.cfg.lr * mhat / (std::sqrt(vhat) + st.cfg.eps);
    }
}

std::vector<double> conjugate_gradient(const MatVec& matvec, std::span<const double> b,
                                       int iters, double tol) {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), p(r), ap(n);

    double rs = 0.0, bnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rs += r[i] * r[i];
        bnorm2 += b[i] * b[i];
    }
    if (bnorm2 == 0.0) return x;
    const double threshold = tol * tol * bnorm2;

    for (int it = 0; it < iters && rs > threshold; ++it) {
        matvec(p, ap);
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        if (!(pap > 0.0) || !std::isfinite(pap)) break; // best effort on breakdown
        const double alpha = rs / pap;
        double rs_next = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rs_next += r[i] * r[i];
        }
        const double beta = rs_next / rs;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rs = rs_next;
    }
    return x;
}

void TrpoConfig::validate() const {
    if (kl_limit <= 0.0) throw std::invalid_argument("trpo: kl_limit must be positive");
    if (cg_iterations < 1 || max_backtracks < 1 || fvp_batch_cap < 1)
        throw std::invalid_argument("trpo: iteration counts must be >= 1");
    if (line_search_shrink <= 0.0 || line_search_shrink >= 1.0)
        throw std::invalid_argument("trpo: shrink factor must lie in (0,1)");
    if (cg_damping < 0.0) throw std::invalid_argument("trpo: damping must be >= 0");
}

namespace {

// Frozen view of the batch at the pre-update parameters.
struct Prepared {
    std::vector<std::vector<double>> inputs;  // policy net inputs
    std::vector<std::vector<double>> old_out; // net outputs (logits or mean)
    std::vector<double> old_logstd;
    std::vector<double> old_logp;
    std::vector<double> advantages;
    const std::span<const TrpoSample>* batch = nullptr;
    bool gaussian = false;
};

double categorical_logp(std::span<const double> logits, int action) {
    return logits[action] - log_sum_exp(logits);
}

double gaussian_logp(std::span<const double> mean, std::span<const double> logstd,
                     std::span<const double> action) {
    constexpr double kHalfLog2Pi = 0.9189385332046727;
    double lp = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double z = (action[i] - mean[i]) / std::exp(logstd[i]);
        lp += -0.5 * z * z - logstd[i] - kHalfLog2Pi;
    }
    return lp;
}

double categorical_kl(std::span<const double> old_logits, std::span<const double> new_logits) {
    const double lse_old = log_sum_exp(old_logits);
    const double lse_new = log_sum_exp(new_logits);
    double kl = 0.0;
    for (std::size_t i = 0; i < old_logits.size(); ++i) {
        const double lo = old_logits[i] - lse_old;
        const double ln = new_logits[i] - lse_new;
        kl += std::exp(lo) * (lo - ln);
    }
    return kl;
}

double gaussian_kl(std::span<const double> old_mean, std::span<const double> old_logstd,
                   std::span<const double> new_mean, std::span<const double> new_logstd) {
    double kl = 0.0;
    for (std::size_t i = 0; i < old_mean.size(); ++i) {
        const double so2 = std::exp(2.0 * old_logstd[i]);
        const double sn2 = std::exp(2.0 * new_logstd[i]);
        const double dm = old_mean[i] - new_mean[i];
        kl += new_logstd[i] - old_logstd[i] + (so2 + dm * dm) / (2.0 * sn2) - 0.5;
    }
    return kl;
}

Prepared prepare(const ConditionalPolicy& policy, std::span<const TrpoSample> batch) {
    Prepared prep;
    prep.gaussian = policy.kind() == ActionDistribution::Kind::Gaussian;
    prep.old_logstd.assign(policy.log_std().begin(), policy.log_std().end());
    prep.inputs.reserve(batch.size());
    prep.old_out.reserve(batch.size());
    prep.old_logp.reserve(batch.size());
    prep.advantages.reserve(batch.size());

    Approximator::Workspace ws;
    const int out_dim = policy.net().spec().output_dim;
    for (const auto& s : batch) {
        if (!std::isfinite(s.advantage))
            throw std::invalid_argument("trpo_step: non-finite advantage");
        prep.inputs.push_back(policy.make_input(s.features, s.task));
        std::vector<double> out(out_dim);
        policy.net().forward_into(prep.inputs.back(), out, ws);
        double lp = prep.gaussian ? gaussian_logp(out, prep.old_logstd, s.action)
                                  : categorical_logp(out, action_index(s.action));
        prep.old_out.push_back(std::move(out));
        prep.old_logp.push_back(lp);
        prep.advantages.push_back(s.advantage);
    }
    return prep;
}

std::vector<double> surrogate_gradient(const ConditionalPolicy& policy, const Prepared& prep,
                                       std::span<const TrpoSample> batch) {
    const int n_net = policy.net().param_count();
    std::vector<double> grad(policy.param_count(), 0.0);
    std::span<double> net_grad(grad.data(), n_net);
    Approximator::Workspace ws;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const int out_dim = policy.net().spec().output_dim;
    std::vector<double> ograd(out_dim);

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double w = prep.advantages[i] * inv_n;
        if (!prep.gaussian) {
            const auto& logits = prep.old_out[i];
            const double lse = log_sum_exp(logits);
            const int a = action_index(batch[i].action);
            for (int j = 0; j < out_dim; ++j)
                ograd[j] = w * ((j == a ? 1.0 : 0.0) - std::exp(logits[j] - lse));
            policy.net().accumulate_backward(prep.inputs[i], ograd, net_grad, ws);
        } else {
            const auto& mean = prep.old_out[i];
            for (int j = 0; j < out_dim; ++j) {
                const double sd = std::exp(prep.old_logstd[j]);
                const double z = (batch[i].action[j] - mean[j]) / sd;
                ograd[j] = w * z / sd;
                grad[n_net + j] += w * (z * z - 1.0);
            }
            policy.net().accumulate_backward(prep.inputs[i], ograd, net_grad, ws);
        }
    }
    return grad;
}

// Exact KL-Hessian-vector product at the expansion point, via a forward-mode
// pass through the net composed with the closed-form distribution Fisher.
void fvp_into(const ConditionalPolicy& policy, const Prepared& prep,
              std::span<const std::size_t> rows, std::span<const double> vec, double damping,
              std::span<double> out, Approximator::Workspace& ws) {
    const int n_net = policy.net().param_count();
    const int out_dim = policy.net().spec().output_dim;
    std::fill(out.begin(), out.end(), 0.0);
    std::span<double> net_out(out.data(), n_net);
    std::span<const double> net_vec(vec.data(), n_net);
    std::vector<double> u(out_dim), w(out_dim);

    for (std::size_t row : rows) {
        policy.net().jvp_into(prep.inputs[row], net_vec, u, ws);
        if (!prep.gaussian) {
            const auto& logits = prep.old_out[row];
            const double lse = log_sum_exp(logits);
            double dot = 0.0;
            std::vector<double>& p = w; // reuse buffer for probabilities
            for (int j = 0; j < out_dim; ++j) {
                p[j] = std::exp(logits[j] - lse);
                dot += p[j] * u[j];
            }
            for (int j = 0; j < out_dim; ++j) w[j] = p[j] * (u[j] - dot);
            policy.net().accumulate_backward(prep.inputs[row], w, net_out, ws);
        } else {
            for (int j = 0; j < out_dim; ++j)
                w[j] = u[j] / std::exp(2.0 * prep.old_logstd[j]);
            policy.net().accumulate_backward(prep.inputs[row], w, net_out, ws);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (double& v : out) v *= inv_n;
    if (prep.gaussian) {
        // State-independent log-std block: Fisher is 2*I for every sample.
        for (int j = 0; j < out_dim; ++j) out[n_net + j] += 2.0 * vec[n_net + j];
    }
    for (std::size_t i = 0; i < vec.size(); ++i) out[i] += damping * vec[i];
}

struct Evaluation {
    double gain = 0.0;
    double kl = 0.0;
    bool finite = true;
};

Evaluation evaluate_candidate(const ConditionalPolicy& policy, const Prepared& prep,
                              std::span<const TrpoSample> batch) {
    Evaluation ev;
    Approximator::Workspace ws;
    const int out_dim = policy.net().spec().output_dim;
    std::vector<double> out(out_dim);
    double surrogate = 0.0, surrogate_old = 0.0, kl = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        policy.net().forward_into(prep.inputs[i], out, ws);
        double lp_new, kl_i;
        if (!prep.gaussian) {
            lp_new = categorical_logp(out, action_index(batch[i].action));
            kl_i = categorical_kl(prep.old_out[i], out);
        } else {
            lp_new = gaussian_logp(out, policy.log_std(), batch[i].action);
            kl_i = gaussian_kl(prep.old_out[i], prep.old_logstd, out, policy.log_std());
        }
        const double ratio = std::exp(lp_new - prep.old_logp[i]);
        surrogate += ratio * prep.advantages[i];
        surrogate_old += prep.advantages[i];
        kl += kl_i;
        if (!std::isfinite(ratio) || !std::isfinite(kl_i)) ev.finite = false;
    }
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    ev.gain = (surrogate - surrogate_old) * inv_n;
    ev.kl = kl * inv_n;
    return ev;
}

std::vector<std::size_t> fvp_rows(std::size_t n, int cap) {
    std::vector<std::size_t> rows;
    if (static_cast<int>(n) <= cap) {
        rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    } else {
        const double stride = static_cast<double>(n) / cap;
        rows.reserve(cap);
        for (int k = 0; k < cap; ++k)
            rows.push_back(static_cast<std::size_t>(k * stride));
    }
    return rows;
}

} // namespace

double mean_kl(const ConditionalPolicy& policy, std::span<const TrpoSample> batch,
               std::span<const ActionDistribution> old_dists) {
    double kl = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        auto d = policy.distribution(batch[i].features, batch[i].task);
        if (d.kind == ActionDistribution::Kind::Categorical)
            kl += categorical_kl(old_dists[i].logits, d.logits);
        else
            kl += gaussian_kl(old_dists[i].mean, old_dists[i].log_std, d.mean, d.log_std);
    }
    return kl / static_cast<double>(batch.size());
}

std::vector<double> kl_gradient(const ConditionalPolicy& policy,
                                std::span<const TrpoSample> batch,
                                std::span<const ActionDistribution> old_dists) {
    const int n_net = policy.net().param_count();
    std::vector<double> grad(policy.param_count(), 0.0);
    std::span<double> net_grad(grad.data(), n_net);
    Approximator::Workspace ws;
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    for (std::size_t i = 0; i < batch.size(); ++i) {
        auto input = policy.make_input(batch[i].features, batch[i].task);
        auto d = policy.distribution(batch[i].features, batch[i].task);
        if (d.kind == ActionDistribution::Kind::Categorical) {
            std::vector<double> ograd(d.probs.size());
            for (std::size_t j = 0; j < d.probs.size(); ++j)
                ograd[j] = inv_n * (d.probs[j] - old_dists[i].probs[j]);
            policy.net().accumulate_backward(input, ograd, net_grad, ws);
        } else {
            std::vector<double> ograd(d.mean.size());
            for (std::size_t j = 0; j < d.mean.size(); ++j) {
                const double sn2 = std::exp(2.0 * d.log_std[j]);
                const double so2 = std::exp(2.0 * old_dists[i].log_std[j]);
                const double dm = d.mean[j] - old_dists[i].mean[j];
                ograd[j] = inv_n * dm / sn2;
                grad[n_net + j] += inv_n * (1.0 - (so2 + dm * dm) / sn2);
            }
            policy.net().accumulate_backward(input, ograd, net_grad, ws);
        }
    }
    return grad;
}

std::vector<double> fisher_vector_product(const ConditionalPolicy& policy,
                                          std::span<const TrpoSample> batch,
                                          std::span<const double> vec, double damping,
                                          int batch_cap) {
    Prepared prep = prepare(policy, batch);
    auto rows = fvp_rows(batch.size(), batch_cap);
    std::vector<double> out(policy.param_count());
    Approximator::Workspace ws;
    fvp_into(policy, prep, rows, vec, damping, out, ws);
    return out;
}

TrpoResult trpo_step(ConditionalPolicy& policy, std::span<const TrpoSample> batch,
                     const TrpoConfig& cfg) {
    cfg.validate();
    if (batch.empty()) throw std::invalid_argument("trpo_step: empty batch");

    Prepared prep = prepare(policy, batch);
    std::vector<double> g = surrogate_gradient(policy, prep, batch);

    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    TrpoResult result;
    if (gmax < 1e-12) return result; // zero gradient: parameters untouched

    auto rows = fvp_rows(batch.size(), cfg.fvp_batch_cap);
    Approximator::Workspace fvp_ws;
    MatVec matvec = [&](std::span<const double> v, std::span<double> out) {
        fvp_into(policy, prep, rows, v, cfg.cg_damping, out, fvp_ws);
    };

    std::vector<double> x = conjugate_gradient(matvec, g, cfg.cg_iterations, 1e-10);
    std::vector<double> ax(x.size());
    matvec(x, ax);
    double xax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) xax += x[i] * ax[i];
    if (!(xax > 0.0) || !std::isfinite(xax)) {
        result.warning = true;
        return result;
    }
    const double full_scale = std::sqrt(2.0 * cfg.kl_limit / xax);

    const std::vector<double> theta_old = policy.get_params();
    std::vector<double> theta(theta_old.size());
    double alpha = 1.0;
    for (int k = 0; k < cfg.max_backtracks; ++k, alpha *= cfg.line_search_shrink) {
        for (std::size_t i = 0; i < theta.size(); ++i)
            theta[i] = theta_old[i] + alpha * full_scale * x[i];
        policy.set_params(theta);
        Evaluation ev = evaluate_candidate(policy, prep, batch);
        if (ev.finite && ev.gain >= 0.0 && ev.kl <= cfg.kl_limit) {
            result.accepted = true;
            result.kl = ev.kl;
            result.surrogate_gain = ev.gain;
            result.backtracks = k;
            return result;
        }
    }
    policy.set_params(theta_old);
    return result;
}

} // namespace sgail
