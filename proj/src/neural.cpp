#include "beamopt/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "beamopt/kernels.hpp"

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

namespace beamopt {

namespace {

size_t conv_w_size(const Layer& l) {
    return static_cast<size_t>(l.spec.units) * l.in_shape.ch * l.kh * l.kw;
}

void materialize(Layer& l) {
    const LayerSpec& s = l.spec;
    if (s.units < 1) throw ConfigError("layer needs at least one unit/filter");
    if (s.kind == LayerKind::Conv2d) {
        if (s.kernel_h < 1 || s.kernel_w < 1 || s.stride_h < 1 || s.stride_w < 1) {
            throw ConfigError("conv kernel and stride must be positive");
        }
        l.kh = std::min(s.kernel_h, l.in_shape.h);
        l.kw = std::min(s.kernel_w, l.in_shape.w);
        int out_h = (l.in_shape.h + s.stride_h - 1) / s.stride_h;
        int out_w = (l.in_shape.w + s.stride_w - 1) / s.stride_w;
        int pad_h = std::max((out_h - 1) * s.stride_h + l.kh - l.in_shape.h, 0);
        int pad_w = std::max((out_w - 1) * s.stride_w + l.kw - l.in_shape.w, 0);
        l.pad_top = pad_h / 2;
        l.pad_left = pad_w / 2;
        l.out_shape = {s.units, out_h, out_w};
        l.w.assign(conv_w_size(l), 0.0);
    } else {
        l.kh = l.kw = 0;
        l.pad_top = l.pad_left = 0;
        l.out_shape = {1, 1, s.units};
        l.w.assign(static_cast<size_t>(s.units) * l.in_shape.size(), 0.0);
    }
    l.b.assign(s.units, 0.0);
}

}  // namespace

QNetworkParams build_network(const Shape3& input_shape,
                             const std::vector<LayerSpec>& specs,
                             int n_outputs) {
    if (input_shape.size() < 1) throw ConfigError("empty network input shape");
    if (n_outputs < 1) throw ConfigError("network needs at least one output");
    if (specs.empty()) throw ConfigError("network needs at least one layer");
    const LayerSpec& last = specs.back();
    if (last.kind != LayerKind::Dense || last.activation != Activation::Linear ||
        last.units != n_outputs) {
        throw ConfigError(
            "final layer must be dense, linear, with one unit per action");
    }
    QNetworkParams net;
    net.input_shape = input_shape;
    net.n_outputs = n_outputs;
    Shape3 shape = input_shape;
    for (const LayerSpec& spec : specs) {
        Layer l;
        l.spec = spec;
        l.in_shape = shape;
        if (spec.kind == LayerKind::Dense) {
            l.in_shape = {1, 1, shape.size()};
        }
        materialize(l);
        shape = l.out_shape;
        net.layers.push_back(std::move(l));
    }
    return net;
}

void init_weights(QNetworkParams& net, SeededRng& rng) {
    for (Layer& l : net.layers) {
        double fan_in, fan_out;
        if (l.spec.kind == LayerKind::Conv2d) {
            fan_in = static_cast<double>(l.in_shape.ch) * l.kh * l.kw;
            fan_out = static_cast<double>(l.spec.units) * l.kh * l.kw;
        } else {
            fan_in = static_cast<double>(l.in_shape.size());
            fan_out = static_cast<double>(l.spec.units);
        }
        double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& x : l.w) x = rng.uniform_range(-limit, limit);
        for (double& x : l.b) x = 0.0;
    }
}

namespace {

// Gathers the receptive field of every output position into one contiguous
// patch row, zero-filled where the kernel hangs past the input edge. Turns
// each conv output into a single long dot instead of many short ones.
void fill_cols(const Layer& l, const std::vector<double>& in,
               std::vector<double>& cols) {
    const int C = l.in_shape.ch, H = l.in_shape.h, W = l.in_shape.w;
    const int OH = l.out_shape.h, OW = l.out_shape.w;
    const int sh = l.spec.stride_h, sw = l.spec.stride_w;
    const size_t patch = static_cast<size_t>(C) * l.kh * l.kw;
    cols.assign(static_cast<size_t>(OH) * OW * patch, 0.0);
    for (int oy = 0; oy < OH; ++oy) {
        int iy0 = oy * sh - l.pad_top;
        int ky_lo = std::max(0, -iy0);
        int ky_hi = std::min(l.kh, H - iy0);
        for (int ox = 0; ox < OW; ++ox) {
            int ix0 = ox * sw - l.pad_left;
            int kx_lo = std::max(0, -ix0);
            int kx_hi = std::min(l.kw, W - ix0);
            int len = kx_hi - kx_lo;
            if (len <= 0) continue;
            double* row =
                cols.data() + (static_cast<size_t>(oy) * OW + ox) * patch;
            for (int c = 0; c < C; ++c) {
                const double* in_c = in.data() + (static_cast<size_t>(c) * H) * W;
                for (int ky = ky_lo; ky < ky_hi; ++ky) {
                    const double* src =
                        in_c + static_cast<size_t>(iy0 + ky) * W + ix0 + kx_lo;
                    std::copy(src, src + len,
                              row + (static_cast<size_t>(c) * l.kh + ky) * l.kw +
                                  kx_lo);
                }
            }
        }
    }
}

void conv_forward(const Layer& l, const std::vector<double>& in,
                  std::vector<double>& pre, std::vector<double>& cols) {
    const int F = l.spec.units;
    const size_t patch =
        static_cast<size_t>(l.in_shape.ch) * l.kh * l.kw;
    const size_t n_out = static_cast<size_t>(l.out_shape.h) * l.out_shape.w;
    fill_cols(l, in, cols);
    pre.resize(static_cast<size_t>(F) * n_out);
    for (int f = 0; f < F; ++f) {
        const double* kf = l.w.data() + static_cast<size_t>(f) * patch;
        double* out_f = pre.data() + static_cast<size_t>(f) * n_out;
        for (size_t o = 0; o < n_out; ++o) {
            out_f[o] = l.b[f] + kernels::dot(cols.data() + o * patch, kf, patch);
        }
    }
}

void dense_forward(const Layer& l, const std::vector<double>& in,
                   std::vector<double>& pre) {
    const int U = l.spec.units;
    const size_t in_size = l.in_shape.size();
    pre.resize(U);
    for (int u = 0; u < U; ++u) {
        pre[u] = l.b[u] +
                 kernels::dot(l.w.data() + static_cast<size_t>(u) * in_size,
                              in.data(), in_size);
    }
}

void conv_backward(const Layer& l, const std::vector<double>& in,
                   const std::vector<double>& d_pre, LayerGrad& grad,
                   std::vector<double>* d_in, std::vector<double>& cols,
                   std::vector<double>& dcols) {
    const int C = l.in_shape.ch, H = l.in_shape.h, W = l.in_shape.w;
    const int F = l.spec.units, OH = l.out_shape.h, OW = l.out_shape.w;
    const int sh = l.spec.stride_h, sw = l.spec.stride_w;
    const size_t patch = static_cast<size_t>(C) * l.kh * l.kw;
    const size_t n_out = static_cast<size_t>(OH) * OW;
    fill_cols(l, in, cols);
    if (d_in) dcols.assign(n_out * patch, 0.0);
    for (int f = 0; f < F; ++f) {
        const double* kf = l.w.data() + static_cast<size_t>(f) * patch;
        double* gkf = grad.w.data() + static_cast<size_t>(f) * patch;
        const double* dp_f = d_pre.data() + static_cast<size_t>(f) * n_out;
        for (size_t o = 0; o < n_out; ++o) {
            double g = dp_f[o];
            if (g == 0.0) continue;
            grad.b[f] += g;
            kernels::axpy(g, cols.data() + o * patch, gkf, patch);
            if (d_in) kernels::axpy(g, kf, dcols.data() + o * patch, patch);
        }
    }
    if (!d_in) return;
    // Scatter the patch-space gradient back; overlapping windows accumulate.
    d_in->assign(in.size(), 0.0);
    for (int oy = 0; oy < OH; ++oy) {
        int iy0 = oy * sh - l.pad_top;
        int ky_lo = std::max(0, -iy0);
        int ky_hi = std::min(l.kh, H - iy0);
        for (int ox = 0; ox < OW; ++ox) {
            int ix0 = ox * sw - l.pad_left;
            int kx_lo = std::max(0, -ix0);
            int kx_hi = std::min(l.kw, W - ix0);
            int len = kx_hi - kx_lo;
            if (len <= 0) continue;
            const double* row =
                dcols.data() + (static_cast<size_t>(oy) * OW + ox) * patch;
            for (int c = 0; c < C; ++c) {
                double* din_c = d_in->data() + (static_cast<size_t>(c) * H) * W;
                for (int ky = ky_lo; ky < ky_hi; ++ky) {
                    kernels::axpy(
                        1.0,
                        row + (static_cast<size_t>(c) * l.kh + ky) * l.kw + kx_lo,
                        din_c + static_cast<size_t>(iy0 + ky) * W + ix0 + kx_lo,
                        len);
                }
            }
        }
    }
}

void dense_backward(const Layer& l, const std::vector<double>& in,
                    const std::vector<double>& d_pre, LayerGrad& grad,
                    std::vector<double>* d_in) {
    const int U = l.spec.units;
    const size_t in_size = l.in_shape.size();
    if (d_in) d_in->assign(in_size, 0.0);
    for (int u = 0; u < U; ++u) {
        double g = d_pre[u];
        if (g == 0.0) continue;
        grad.b[u] += g;
        kernels::axpy(g, in.data(), grad.w.data() + static_cast<size_t>(u) * in_size,
                      in_size);
        if (d_in) {
            kernels::axpy(g, l.w.data() + static_cast<size_t>(u) * in_size,
                          d_in->data(), in_size);
        }
    }
}

}  // namespace

const std::vector<double>& forward_raw(const QNetworkParams& net,
                                       const std::vector<double>& input,
                                       ForwardCache& cache) {
    if (static_cast<int>(input.size()) != net.input_shape.size()) {
        throw ShapeMismatch("network input has wrong size");
    }
    size_t n_layers = net.layers.size();
    cache.inputs.resize(n_layers);
    cache.pre.resize(n_layers);
    cache.inputs[0] = input;
    for (size_t i = 0; i < n_layers; ++i) {
        const Layer& l = net.layers[i];
        if (l.spec.kind == LayerKind::Conv2d) {
            conv_forward(l, cache.inputs[i], cache.pre[i], cache.cols);
        } else {
            dense_forward(l, cache.inputs[i], cache.pre[i]);
        }
        // post-activation feeds the next layer (pre kept for backprop)
        const std::vector<double>& pre = cache.pre[i];
        std::vector<double>& dst =
            i + 1 < n_layers ? cache.inputs[i + 1] : cache.out;
        dst.resize(pre.size());
        if (l.spec.activation == Activation::Relu) {
            kernels::relu(pre.data(), dst.data(), pre.size());
        } else {
            dst = pre;
        }
    }
    return cache.out;
}

std::vector<double> forward(const QNetworkParams& net,
                            const StateTensor& state) {
    if (state.frames != net.input_shape.ch || state.rows != net.input_shape.h ||
        state.cols != net.input_shape.w) {
        throw ShapeMismatch("state tensor does not match network input shape");
    }
    std::vector<double> input(state.v.begin(), state.v.end());
    ForwardCache cache;
    return forward_raw(net, input, cache);
}

void Gradients::zero() {
    for (auto& l : layers) {
        std::fill(l.w.begin(), l.w.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
}

Gradients make_gradients(const QNetworkParams& net) {
    Gradients g;
    g.layers.resize(net.layers.size());
    for (size_t i = 0; i < net.layers.size(); ++i) {
        g.layers[i].w.assign(net.layers[i].w.size(), 0.0);
        g.layers[i].b.assign(net.layers[i].b.size(), 0.0);
    }
    return g;
}

void backward(const QNetworkParams& net, const ForwardCache& cache,
              int action_index, double td_target, Gradients& grads) {
    size_t n_layers = net.layers.size();
    if (grads.layers.size() != n_layers) {
        throw ShapeMismatch("gradient holder does not match network");
    }
    if (action_index < 0 || action_index >= net.n_outputs) {
        throw IndexError("action index outside network outputs");
    }
    // d(td_target - q)^2 / dq = 2 (q - td_target), only the selected output
    std::vector<double> d_out(net.n_outputs, 0.0);
    d_out[action_index] = 2.0 * (cache.out[action_index] - td_target);

    std::vector<double> d_next;
    for (size_t idx = n_layers; idx-- > 0;) {
        const Layer& l = net.layers[idx];
        // back through the activation: relu zeroes where pre <= 0
        if (l.spec.activation == Activation::Relu) {
            kernels::relu_mask(cache.pre[idx].data(), d_out.data(),
                               d_out.size());
        }
        std::vector<double>* d_in = idx > 0 ? &d_next : nullptr;
        if (l.spec.kind == LayerKind::Conv2d) {
            conv_backward(l, cache.inputs[idx], d_out, grads.layers[idx], d_in,
                          cache.cols, cache.dcols);
        } else {
            dense_backward(l, cache.inputs[idx], d_out, grads.layers[idx], d_in);
        }
        if (idx > 0) d_out.swap(d_next);
    }
}

void scale_gradients(Gradients& grads, double factor) {
    for (auto& l : grads.layers) {
        for (double& x : l.w) x *= factor;
        for (double& x : l.b) x *= factor;
    }
}

AdamState make_adam(const QNetworkParams& net, double alpha, double beta1,
                    double beta2, double eps) {
    AdamState s;
    s.alpha = alpha;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    s.t = 0;
    s.m.resize(net.layers.size());
    s.v.resize(net.layers.size());
    for (size_t i = 0; i < net.layers.size(); ++i) {
        s.m[i].w.assign(net.layers[i].w.size(), 0.0);
        s.m[i].b.assign(net.layers[i].b.size(), 0.0);
        s.v[i].w.assign(net.layers[i].w.size(), 0.0);
        s.v[i].b.assign(net.layers[i].b.size(), 0.0);
    }
    return s;
}

void adam_step(AdamState& state, QNetworkParams& net, const Gradients& grads) {
    if (state.m.size() != net.layers.size() ||
        grads.layers.size() != net.layers.size()) {
        throw ShapeMismatch("optimizer state does not match network");
    }
    ++state.t;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (size_t i = 0; i < net.layers.size(); ++i) {
        Layer& l = net.layers[i];
        if (grads.layers[i].w.size() != l.w.size() ||
            grads.layers[i].b.size() != l.b.size()) {
            throw ShapeMismatch("gradient shapes do not match parameters");
        }
        kernels::adam_update(l.w.data(), state.m[i].w.data(),
                             state.v[i].w.data(), grads.layers[i].w.data(),
                             l.w.size(), state.beta1, state.beta2, state.eps,
                             state.alpha, bc1, bc2);
        kernels::adam_update(l.b.data(), state.m[i].b.data(),
                             state.v[i].b.data(), grads.layers[i].b.data(),
                             l.b.size(), state.beta1, state.beta2, state.eps,
                             state.alpha, bc1, bc2);
    }
}

bool same_architecture(const QNetworkParams& a, const QNetworkParams& b) {
    if (!(a.input_shape == b.input_shape) || a.n_outputs != b.n_outputs ||
        a.layers.size() != b.layers.size()) {
        return false;
    }
    for (size_t i = 0; i < a.layers.size(); ++i) {
        const Layer &la = a.layers[i], &lb = b.layers[i];
        if (la.spec.kind != lb.spec.kind || la.spec.units != lb.spec.units ||
            la.spec.kernel_h != lb.spec.kernel_h ||
            la.spec.kernel_w != lb.spec.kernel_w ||
            la.spec.stride_h != lb.spec.stride_h ||
            la.spec.stride_w != lb.spec.stride_w ||
            la.spec.activation != lb.spec.activation ||
            !(la.in_shape == lb.in_shape) || !(la.out_shape == lb.out_shape)) {
            return false;
        }
    }
    return true;
}

void copy_weights(const QNetworkParams& src, QNetworkParams& dst) {
    if (!same_architecture(src, dst)) {
        throw ArchitectureMismatch("cannot copy weights between different nets");
    }
    for (size_t i = 0; i < src.layers.size(); ++i) {
        dst.layers[i].w = src.layers[i].w;
        dst.layers[i].b = src.layers[i].b;
    }
}

namespace {

constexpr std::uint32_t kNetMagic = 0x544e5142;  // "BQNT"
constexpr std::uint32_t kNetVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ParseError("truncated network file");
    return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
    put<std::uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& in, size_t expect) {
    auto n = get<std::uint64_t>(in);
    if (n != expect) throw ParseError("tensor size mismatch in network file");
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw ParseError("truncated network file");
    return v;
}

}  // namespace

void save_network(std::ostream& out, const QNetworkParams& net) {
    put(out, kNetMagic);
    put(out, kNetVersion);
    put<std::int32_t>(out, net.input_shape.ch);
    put<std::int32_t>(out, net.input_shape.h);
    put<std::int32_t>(out, net.input_shape.w);
    put<std::int32_t>(out, net.n_outputs);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers.size()));
    for (const Layer& l : net.layers) {
        put<std::uint8_t>(out, l.spec.kind == LayerKind::Conv2d ? 1 : 0);
        put<std::uint8_t>(out, l.spec.activation == Activation::Relu ? 1 : 0);
        put<std::int32_t>(out, l.spec.units);
        put<std::int32_t>(out, l.spec.kernel_h);
        put<std::int32_t>(out, l.spec.kernel_w);
        put<std::int32_t>(out, l.spec.stride_h);
        put<std::int32_t>(out, l.spec.stride_w);
        put_doubles(out, l.w);
        put_doubles(out, l.b);
    }
    if (!out) throw IoError("failed writing network");
}

QNetworkParams load_network(std::istream& in) {
    if (get<std::uint32_t>(in) != kNetMagic) {
        throw ParseError("not a network file (bad magic)");
    }
    if (get<std::uint32_t>(in) != kNetVersion) {
        throw ParseError("unsupported network file version");
    }
    Shape3 input;
    input.ch = get<std::int32_t>(in);
    input.h = get<std::int32_t>(in);
    input.w = get<std::int32_t>(in);
    int n_outputs = get<std::int32_t>(in);
    auto n_layers = get<std::uint32_t>(in);
    QNetworkParams net;
    net.input_shape = input;
    net.n_outputs = n_outputs;
    Shape3 shape = input;
    for (std::uint32_t i = 0; i < n_layers; ++i) {
        LayerSpec spec;
        spec.kind = get<std::uint8_t>(in) ? LayerKind::Conv2d : LayerKind::Dense;
        spec.activation =
            get<std::uint8_t>(in) ? Activation::Relu : Activation::Linear;
        spec.units = get<std::int32_t>(in);
        spec.kernel_h = get<std::int32_t>(in);
        spec.kernel_w = get<std::int32_t>(in);
        spec.stride_h = get<std::int32_t>(in);
        spec.stride_w = get<std::int32_t>(in);
        Layer l;
        l.spec = spec;
        l.in_shape = spec.kind == LayerKind::Dense ? Shape3{1, 1, shape.size()}
                                                   : shape;
        materialize(l);
        l.w = get_doubles(in, l.w.size());
        l.b = get_doubles(in, l.b.size());
        shape = l.out_shape;
        net.layers.push_back(std::move(l));
    }
    if (net.layers.empty()) throw ParseError("network file has no layers");
    const Layer& last = net.layers.back();
    if (last.spec.kind != LayerKind::Dense || last.spec.units != n_outputs) {
        throw ParseError("network file output layer inconsistent");
    }
    return net;
}

void save_adam(std::ostream& out, const AdamState& state) {
    put(out, state.alpha);
    put(out, state.beta1);
    put(out, state.beta2);
    put(out, state.eps);
    put<std::int64_t>(out, state.t);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(state.m.size()));
    for (size_t i = 0; i < state.m.size(); ++i) {
        put_doubles(out, state.m[i].w);
        put_doubles(out, state.m[i].b);
        put_doubles(out, state.v[i].w);
        put_doubles(out, state.v[i].b);
    }
    if (!out) throw IoError("failed writing optimizer state");
}

AdamState load_adam(std::istream& in, const QNetworkParams& net) {
    AdamState s;
    s.alpha = get<double>(in);
    s.beta1 = get<double>(in);
    s.beta2 = get<double>(in);
    s.eps = get<double>(in);
    s.t = get<std::int64_t>(in);
    auto n = get<std::uint32_t>(in);
    if (n != net.layers.size()) {
        throw ParseError("optimizer state does not match network layout");
    }
    s.m.resize(n);
    s.v.resize(n);
    for (size_t i = 0; i < n; ++i) {
        s.m[i].w = get_doubles(in, net.layers[i].w.size());
        s.m[i].b = get_doubles(in, net.layers[i].b.size());
        s.v[i].w = get_doubles(in, net.layers[i].w.size());
        s.v[i].b = get_doubles(in, net.layers[i].b.size());
    }
    return s;
}

}  // namespace beamopt
