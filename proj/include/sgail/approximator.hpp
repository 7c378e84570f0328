#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sgail {

enum class Activation { LeakyRelu };
enum class OutputHead { Linear, Softmax };

/// Architecture of a feedforward approximator. hidden_layers may be empty,
/// in which case the network is a single affine map.
struct ApproximatorSpec {
    int input_dim = 1;
    std::vector<int> hidden_layers;
    int output_dim = 1;
    Activation hidden_activation = Activation::LeakyRelu;
    OutputHead output_head = OutputHead::Linear;

    /// Total parameter count: sum over layers of (fan_in + 1) * fan_out.
    int param_count() const;
    /// Throws std::invalid_argument on zero/negative dimensions or a softmax
    /// head with fewer than two outputs.
    void validate() const;

    bool operator==(const ApproximatorSpec&) const = default;
};

/// One (input, output-gradient) pair for backward().
struct BackwardSample {
    std::vector<double> input;
    std::vector<double> output_grad;
};

/// Small dense feedforward network over a flat parameter vector. Forward,
/// reverse-mode gradients w.r.t. parameters, and forward-mode directional
/// derivatives (jvp) are all deterministic given params and inputs.
///
/// Parameter layout: per layer, weights row-major (fan_out x fan_in), then
/// biases (fan_out).
class Approximator {
  public:
    /// Reusable scratch buffers for the hot per-sample paths.
    struct Workspace {
        std::vector<std::vector<double>> act;   // activations per layer (incl. input)
        std::vector<std::vector<double>> pre;   // pre-activations per layer
        std::vector<std::vector<double>> tan;   // tangents (jvp)
        std::vector<double> delta;              // backprop buffer
        std::vector<double> delta_prev;
    };

    Approximator(ApproximatorSpec spec, std::uint64_t init_seed);

    const ApproximatorSpec& spec() const { return spec_; }
    int param_count() const { return static_cast<int>(params_.size()); }

    std::span<const double> params() const { return params_; }
    std::vector<double> get_params() const { return params_; }
    void set_params(std::span<const double> p);

    std::vector<double> forward(std::span<const double> input) const;
    void forward_into(std::span<const double> input, std::span<double> out,
                      Workspace& ws) const;

    /// Gradient of sum over the batch of <output, output_grad> w.r.t. params.
    /// Linear in the output-gradients; empty batch gives the zero vector.
    std::vector<double> backward(std::span<const BackwardSample> batch) const;
    void accumulate_backward(std::span<const double> input,
                             std::span<const double> output_grad,
                             std::span<double> grad, Workspace& ws) const;

    /// Directional derivative of the output w.r.t. params along `tangent`,
    /// evaluated at the current params.
    std::vector<double> jvp(std::span<const double> input,
                            std::span<const double> tangent) const;
    void jvp_into(std::span<const double> input, std::span<const double> tangent,
                  std::span<double> out_tangent, Workspace& ws) const;

  private:
    void prepare(Workspace& ws) const;

    ApproximatorSpec spec_;
    std::vector<int> layer_sizes_;   // input_dim, hidden..., output_dim
    std::vector<int> weight_offset_; // offset of each layer's weight block
    std::vector<double> params_;
};

constexpr double kLeakyReluSlope = 0.01;

/// Numerically stable softmax (in place over a logits buffer).
void softmax_inplace(std::span<double> logits);
/// log(sum(exp(x))) through the max-shift path.
double log_sum_exp(std::span<const double> x);

} // namespace sgail
