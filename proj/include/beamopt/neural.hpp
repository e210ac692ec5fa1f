#pragma once

#include <iosfwd>
#include <vector>

#include "beamopt/coverage.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/rng.hpp"

namespace beamopt {

enum class LayerKind { Conv2d, Dense };
enum class Activation { Relu, Linear };

struct Shape3 {
    int ch = 1, h = 1, w = 1;
    int size() const { return ch * h * w; }
    bool operator==(const Shape3& o) const = default;
};

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    int units = 0;  // dense units or conv filters
    int kernel_h = 1, kernel_w = 1;
    int stride_h = 1, stride_w = 1;
    Activation activation = Activation::Relu;
};

// A materialized layer. Conv kernels clamp to the input dims (tiny frames),
// padding follows the ceil(in/stride) same-padding law. Dense layers flatten
// whatever shape precedes them.
// Conv weight layout [filter][in_ch][kh][kw]; dense weight layout
// [unit][flattened input]; feature maps are [ch][h][w].
struct Layer {
    LayerSpec spec;
    Shape3 in_shape, out_shape;
    int kh = 0, kw = 0;  // effective kernel after clamping
    int pad_top = 0, pad_left = 0;
    std::vector<double> w, b;
};

struct QNetworkParams {
    Shape3 input_shape;
    int n_outputs = 0;
    std::vector<Layer> layers;
};

// Chains shapes, validates the spec list (last layer must be dense + linear
// with n_outputs units), leaves weights zero.
QNetworkParams build_network(const Shape3& input_shape,
                             const std::vector<LayerSpec>& specs,
                             int n_outputs);

// Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases; draw order is
// layer order, weight layout order.
void init_weights(QNetworkParams& net, SeededRng& rng);

// Per-layer activations kept for backprop. Reused across calls.
struct ForwardCache {
    std::vector<std::vector<double>> inputs;  // input seen by each layer
    std::vector<std::vector<double>> pre;     // pre-activation per layer
    std::vector<double> out;                  // post-activation of last layer
    mutable std::vector<double> cols, dcols;  // im2col scratch for conv layers
};

const std::vector<double>& forward_raw(const QNetworkParams& net,
                                       const std::vector<double>& input,
                                       ForwardCache& cache);

// Spec-level entry: converts the binary state tensor and runs the net.
std::vector<double> forward(const QNetworkParams& net,
                            const StateTensor& state);

struct LayerGrad {
    std::vector<double> w, b;
};

struct Gradients {
    std::vector<LayerGrad> layers;
    void zero();
};

Gradients make_gradients(const QNetworkParams& net);

// Accumulates (+=) the gradients of (td_target - Q[action])^2 into grads,
// using the activations cached by the immediately preceding forward_raw on
// the same input.
void backward(const QNetworkParams& net, const ForwardCache& cache,
              int action_index, double td_target, Gradients& grads);

void scale_gradients(Gradients& grads, double factor);

struct AdamState {
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long t = 0;
    std::vector<LayerGrad> m, v;  // moment accumulators, parameter shapes
};

AdamState make_adam(const QNetworkParams& net, double alpha = 0.001,
                    double beta1 = 0.9, double beta2 = 0.999,
                    double eps = 1e-8);

void adam_step(AdamState& state, QNetworkParams& net, const Gradients& grads);

bool same_architecture(const QNetworkParams& a, const QNetworkParams& b);

// dst gets a deep copy of src's parameters; optimizer state untouched.
void copy_weights(const QNetworkParams& src, QNetworkParams& dst);

// Binary serialization, little-endian doubles, self-describing architecture.
void save_network(std::ostream& out, const QNetworkParams& net);
QNetworkParams load_network(std::istream& in);
void save_adam(std::ostream& out, const AdamState& state);
AdamState load_adam(std::istream& in, const QNetworkParams& net);

}  // namespace beamopt
