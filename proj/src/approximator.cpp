#include "sgail/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sgail {

int ApproximatorSpec::param_count() const {
    int total = 0;
    int fan_in = input_dim;
    for (int h : hidden_layers) {
        total += (fan_in + 1) * h;
        fan_in = h;
    }
    total += (fan_in + 1) * output_dim;
    return total;
}

void ApproximatorSpec::validate() const {
    if (input_dim < 1) throw std::invalid_argument("approximator: input_dim must be >= 1");
    if (output_dim < 1) throw std::invalid_argument("approximator: output_dim must be >= 1");
    for (int h : hidden_layers)
        if (h < 1) throw std::invalid_argument("approximator: hidden layer size must be >= 1");
    if (output_head == OutputHead::Softmax && output_dim < 2)
        throw std::invalid_argument("approximator: softmax head needs output_dim >= 2");
}

void softmax_inplace(std::span<double> logits) {
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

double log_sum_exp(std::span<const double> x) {
    double mx = x[0];
    for (double v : x) mx = std::max(mx, v);
    double sum = 0.0;
    for (double v : x) sum += std::exp(v - mx);
    return mx + std::log(sum);
}

Approximator::Approximator(ApproximatorSpec spec, std::uint64_t init_seed)
    : spec_(std::move(spec)) {
    spec_.validate();
    layer_sizes_.push_back(spec_.input_dim);
    for (int h : spec_.hidden_layers) layer_sizes_.push_back(h);
    layer_sizes_.push_back(spec_.output_dim);

    params_.assign(spec_.param_count(), 0.0);
    std::mt19937_64 rng(init_seed);
    int off = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
        int fan_in = layer_sizes_[l];
        int fan_out = layer_sizes_[l + 1];
        weight_offset_.push_back(off);
        double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (int i = 0; i < fan_in * fan_out; ++i) params_[off + i] = dist(rng);
        // biases stay zero
        off += (fan_in + 1) * fan_out;
    }
}

void Approximator::set_params(std::span<const double> p) {
    if (p.size() != params_.size())
        throw std::invalid_argument("approximator: param vector length mismatch (got " +
                                    std::to_string(p.size()) + ", want " +
                                    std::to_string(params_.size()) + ")");
    std::copy(p.begin(), p.end(), params_.begin());
}

void Approximator::prepare(Workspace& ws) const {
    const std::size_t n = layer_sizes_.size();
    if (ws.act.size() != n) {
        ws.act.resize(n);
        ws.pre.resize(n);
        ws.tan.resize(n);
        for (std::size_t l = 0; l < n; ++l) {
            ws.act[l].resize(layer_sizes_[l]);
            ws.pre[l].resize(layer_sizes_[l]);
            ws.tan[l].resize(layer_sizes_[l]);
        }
        int widest = *std::max_element(layer_sizes_.begin(), layer_sizes_.end());
        ws.delta.resize(widest);
        ws.delta_prev.resize(widest);
    }
}

void Approximator::forward_into(std::span<const double> input, std::span<double> out,
                                Workspace& ws) const {
    if (static_cast<int>(input.size()) != spec_.input_dim)
        throw std::invalid_argument("approximator: input length mismatch");
    if (static_cast<int>(out.size()) != spec_.output_dim)
        throw std::invalid_argument("approximator: output buffer length mismatch");
    prepare(ws);

    std::copy(input.begin(), input.end(), ws.act[0].begin());
    const std::size_t last = layer_sizes_.size() - 1;
    for (std::size_t l = 0; l < last; ++l) {
        const int fan_in = layer_sizes_[l];
        const int fan_out = layer_sizes_[l + 1];
        const double* w = params_.data() + weight_offset_[l];
        const double* b = w + fan_in * fan_out;
        const double* x = ws.act[l].data();
        double* z = ws.pre[l + 1].data();
        for (int j = 0; j < fan_out; ++j) {
            const double* wj = w + j * fan_in;
            double acc = b[j];
            for (int i = 0; i < fan_in; ++i) acc += wj[i] * x[i];
            z[j] = acc;
        }
        double* a = ws.act[l + 1].data();
        if (l + 1 < last) {
            for (int j = 0; j < fan_out; ++j)
                a[j] = z[j] > 0.0 ? z[j] : kLeakyReluSlope * z[j];
        } else {
            std::copy(z, z + fan_out, a);
            if (spec_.output_head == OutputHead::Softmax)
                softmax_inplace({a, static_cast<std::size_t>(fan_out)});
        }
    }
    std::copy(ws.act[last].begin(), ws.act[last].end(), out.begin());
}

std::vector<double> Approximator::forward(std::span<const double> input) const {
    Workspace ws;
    std::vector<double> out(spec_.output_dim);
    forward_into(input, out, ws);
    return out;
}

void Approximator::accumulate_backward(std::span<const double> input,
                                       std::span<const double> output_grad,
                                       std::span<double> grad, Workspace& ws) const {
    if (static_cast<int>(output_grad.size()) != spec_.output_dim)
        throw std::invalid_argument("approximator: output gradient length mismatch");
    if (grad.size() != params_.size())
        throw std::invalid_argument("approximator: gradient buffer length mismatch");

    std::vector<double> out(spec_.output_dim);
    forward_into(input, out, ws); // fills act/pre

    const std::size_t last = layer_sizes_.size() - 1;
    double* delta = ws.delta.data();

    // Head: map output_grad onto pre-activation space of the last layer.
    if (spec_.output_head == OutputHead::Softmax) {
        const double* p = ws.act[last].data();
        double dot = 0.0;
        for (int j = 0; j < spec_.output_dim; ++j) dot += output_grad[j] * p[j];
        for (int j = 0; j < spec_.output_dim; ++j) delta[j] = p[j] * (output_grad[j] - dot);
    } else {
        std::copy(output_grad.begin(), output_grad.end(), delta);
    }

    for (std::size_t l = last; l-- > 0;) {
        const int fan_in = layer_sizes_[l];
        const int fan_out = layer_sizes_[l + 1];
        const double* w = params_.data() + weight_offset_[l];
        double* gw = grad.data() + weight_offset_[l];
        double* gb = gw + fan_in * fan_out;
        const double* x = ws.act[l].data();
        for (int j = 0; j < fan_out; ++j) {
            const double d = delta[j];
            double* gwj = gw + j * fan_in;
            for (int i = 0; i < fan_in; ++i) gwj[i] += d * x[i];
            gb[j] += d;
        }
        if (l == 0) break;
        double* prev = ws.delta_prev.data();
        std::fill(prev, prev + fan_in, 0.0);
        for (int j = 0; j < fan_out; ++j) {
            const double d = delta[j];
            const double* wj = w + j * fan_in;
            for (int i = 0; i < fan_in; ++i) prev[i] += wj[i] * d;
        }
        const double* z = ws.pre[l].data();
        for (int i = 0; i < fan_in; ++i)
            delta[i] = prev[i] * (z[i] > 0.0 ? 1.0 : kLeakyReluSlope);
    }
}

std::vector<double> Approximator::backward(std::span<const BackwardSample> batch) const {
    std::vector<double> grad(params_.size(), 0.0);
    Workspace ws;
    for (const auto& s : batch) accumulate_backward(s.input, s.output_grad, grad, ws);
    return grad;
}

void Approximator::jvp_into(std::span<const double> input, std::span<const double> tangent,
                            std::span<double> out_tangent, Workspace& ws) const {
    if (tangent.size() != params_.size())
        throw std::invalid_argument("approximator: tangent length mismatch");
    if (static_cast<int>(out_tangent.size()) != spec_.output_dim)
        throw std::invalid_argument("approximator: tangent output buffer length mismatch");
    if (static_cast<int>(input.size()) != spec_.input_dim)
        throw std::invalid_argument("approximator: input length mismatch");
    prepare(ws);

    std::copy(input.begin(), input.end(), ws.act[0].begin());
    std::fill(ws.tan[0].begin(), ws.tan[0].end(), 0.0);

    const std::size_t last = layer_sizes_.size() - 1;
    for (std::size_t l = 0; l < last; ++l) {
        const int fan_in = layer_sizes_[l];
        const int fan_out = layer_sizes_[l + 1];
        const double* w = params_.data() + weight_offset_[l];
        const double* b = w + fan_in * fan_out;
        const double* dw = tangent.data() + weight_offset_[l];
        const double* db = dw + fan_in * fan_out;
        const double* x = ws.act[l].data();
        const double* tx = ws.tan[l].data();
        double* z = ws.pre[l + 1].data();
        double* tz = ws.tan[l + 1].data();
        for (int j = 0; j < fan_out; ++j) {
            const double* wj = w + j * fan_in;
            const double* dwj = dw + j * fan_in;
            double acc = b[j];
            double tacc = db[j];
            for (int i = 0; i < fan_in; ++i) {
                acc += wj[i] * x[i];
                tacc += dwj[i] * x[i] + wj[i] * tx[i];
            }
            z[j] = acc;
            tz[j] = tacc;
        }
        double* a = ws.act[l + 1].data();
        if (l + 1 < last) {
            for (int j = 0; j < fan_out; ++j) {
                const double slope = z[j] > 0.0 ? 1.0 : kLeakyReluSlope;
                a[j] = slope * z[j];
                tz[j] *= slope;
            }
        } else {
            std::copy(z, z + fan_out, a);
            if (spec_.output_head == OutputHead::Softmax) {
                softmax_inplace({a, static_cast<std::size_t>(fan_out)});
                double dot = 0.0;
                for (int j = 0; j < fan_out; ++j) dot += a[j] * tz[j];
                for (int j = 0; j < fan_out; ++j) tz[j] = a[j] * (tz[j] - dot);
            }
        }
    }
    std::copy(ws.tan[last].begin(), ws.tan[last].end(), out_tangent.begin());
}

std::vector<double> Approximator::jvp(std::span<const double> input,
                                      std::span<const double> tangent) const {
    Workspace ws;
    std::vector<double> out(spec_.output_dim);
    jvp_into(input, tangent, out, ws);
    return out;
}

} // namespace sgail
