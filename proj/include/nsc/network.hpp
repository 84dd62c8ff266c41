#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nsc/common.hpp"
#include "nsc/rng.hpp"

namespace nsc {

enum class Activation { sine, relu };

// Conditional MLP f(x, t, z). Coordinates are re-fed to every hidden layer
// and the latent code is injected at a fixed set of hidden layers; the
// output layer is linear. Sine layers compute sin(omega * preactivation).
struct NetworkConfig {
    int hidden_layers = 9;
    int hidden_width = 128;
    int latent_dim = 192;
    Activation activation = Activation::sine;
    double omega = 30.0;
    std::vector<int> latent_injection_layers{1, 5, 8};  // 1-based
    bool coords_to_all_layers = true;
    bool clamp_output = false;
    double clamp_value = 0.1;

    static constexpr int kCoordDim = 4;  // x, y, z, t

    bool injects_latent(int layer) const {  // layer in [1, hidden_layers]
        return std::find(latent_injection_layers.begin(), latent_injection_layers.end(),
                         layer) != latent_injection_layers.end();
    }

    // Input width of layer l; hidden layers are 1..hidden_layers, the output
    // layer is hidden_layers+1. Layer 1 sees [coords ; z]; deeper hidden
    // layers see [hidden ; coords? ; z?]; the output layer sees hidden only.
    int input_width(int layer) const {
        if (layer == 1) return kCoordDim + latent_dim;
        if (layer == hidden_layers + 1) return hidden_width;
        int w = hidden_width;
        if (coords_to_all_layers) w += kCoordDim;
        if (injects_latent(layer)) w += latent_dim;
        return w;
    }
    int output_width(int layer) const {
        return layer == hidden_layers + 1 ? 1 : hidden_width;
    }

    void validate() const {
        if (hidden_layers < 1) throw ValidationError("network: hidden_layers must be >= 1");
        if (hidden_width < 1) throw ValidationError("network: hidden_width must be >= 1");
        if (latent_dim < 1) throw ValidationError("network: latent_dim must be >= 1");
        if (omega <= 0.0) throw ValidationError("network: omega must be positive");
        for (int l : latent_injection_layers)
            if (l < 1 || l > hidden_layers)
                throw ValidationError("network: latent injection layer out of range");
    }
};

struct LossConfig {
    double sigma = 0.1;  // code regularization weight is 1/sigma^2

    void validate() const {
        if (sigma <= 0.0) throw ValidationError("loss: sigma must be positive");
    }
};

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Network weights/biases plus the bank of per-sequence latent codes.
template <typename S>
struct AutoDecoderParams {
    std::vector<Mat<S>> weights;  // weights[l-1] is (out x in) for layer l
    std::vector<Vec<S>> biases;
    Mat<S> latent_codes;  // N x latent_dim

    int num_layers() const { return static_cast<int>(weights.size()); }
    int num_sequences() const { return static_cast<int>(latent_codes.rows()); }

    template <typename T>
    AutoDecoderParams<T> cast() const {
        AutoDecoderParams<T> out;
        for (const auto& w : weights) out.weights.push_back(w.template cast<T>());
        for (const auto& b : biases) out.biases.push_back(b.template cast<T>());
        out.latent_codes = latent_codes.template cast<T>();
        return out;
    }
};

template <typename S>
struct Gradients {
    std::vector<Mat<S>> weights;
    std::vector<Vec<S>> biases;
    Vec<S> latent;  // w.r.t. the batch's own latent code only
};

// Weight init: sine mode uses 1/fan_in on the first layer and
// sqrt(6/fan_in)/omega on deeper layers; relu mode uses sqrt(6/fan_in)
// everywhere. Biases are zero, latent codes are i.i.d. N(0, 0.1^2).
template <typename S = double>
AutoDecoderParams<S> init_params(const NetworkConfig& cfg, int num_sequences,
                                 std::uint64_t seed) {
    cfg.validate();
    if (num_sequences < 1) throw ValidationError("init_params: num_sequences must be >= 1");
    Rng rng(seed);
    AutoDecoderParams<S> p;
    const int layers = cfg.hidden_layers + 1;
    for (int l = 1; l <= layers; ++l) {
        const int in = cfg.input_width(l);
        const int out = cfg.output_width(l);
        double bound;
        if (cfg.activation == Activation::sine)
            bound = (l == 1) ? 1.0 / in : std::sqrt(6.0 / in) / cfg.omega;
        else
            bound = std::sqrt(6.0 / in);
        Mat<S> w(out, in);
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c)
                w(r, c) = static_cast<S>(rng.uniform(-bound, bound));
        p.weights.push_back(std::move(w));
        p.biases.push_back(Vec<S>::Zero(out));
    }
    p.latent_codes.resize(num_sequences, cfg.latent_dim);
    for (int i = 0; i < num_sequences; ++i)
        for (int j = 0; j < cfg.latent_dim; ++j)
            p.latent_codes(i, j) = static_cast<S>(rng.normal(0.0, 0.1));
    return p;
}

// Per-layer inputs and preactivations for one batched forward pass.
template <typename S>
struct ForwardCache {
    Mat<S> coords;                // 4 x B
    std::vector<Mat<S>> inputs;   // input matrix of each layer
    std::vector<Mat<S>> preacts;  // hidden preactivations
    Eigen::Array<S, 1, Eigen::Dynamic> raw_out;  // before optional clamp
    Eigen::Array<S, 1, Eigen::Dynamic> out;
};

// Batched forward pass: coords is 4 x B, z is the latent code for the whole
// batch. Caching is optional; pass nullptr for inference-only evaluation.
template <typename S>
Eigen::Array<S, 1, Eigen::Dynamic> forward_batch(const AutoDecoderParams<S>& p,
                                                 const NetworkConfig& cfg,
                                                 const Eigen::Ref<const Mat<S>>& coords,
                                                 const Eigen::Ref<const Vec<S>>& z,
                                                 ForwardCache<S>* cache = nullptr) {
    const auto B = coords.cols();
    if (coords.rows() != NetworkConfig::kCoordDim)
        throw ValidationError("forward: coords must have 4 rows");
    if (!coords.allFinite() || !z.allFinite())
        throw NumericalError("forward: non-finite input");
    const S omega = static_cast<S>(cfg.omega);

    if (cache) {
        cache->coords = coords;
        cache->inputs.clear();
        cache->preacts.clear();
    }

    Mat<S> act;  // activations of the previous hidden layer
    for (int l = 1; l <= cfg.hidden_layers; ++l) {
        Mat<S> in(cfg.input_width(l), B);
        if (l == 1) {
            in.topRows(NetworkConfig::kCoordDim) = coords;
            in.bottomRows(cfg.latent_dim).colwise() = z;
        } else {
            int row = cfg.hidden_width;
            in.topRows(cfg.hidden_width) = act;
            if (cfg.coords_to_all_layers) {
                in.middleRows(row, NetworkConfig::kCoordDim) = coords;
                row += NetworkConfig::kCoordDim;
            }
            if (cfg.injects_latent(l)) in.middleRows(row, cfg.latent_dim).colwise() = z;
        }
        Mat<S> pre = (p.weights[l - 1] * in).colwise() + p.biases[l - 1];
        if (cache) {
            cache->inputs.push_back(std::move(in));
            cache->preacts.push_back(pre);
        }
        if (cfg.activation == Activation::sine)
            act = (omega * pre.array()).sin();
        else
            act = pre.array().max(S(0));
    }
    Mat<S> raw = (p.weights.back() * act).colwise() + p.biases.back();
    Eigen::Array<S, 1, Eigen::Dynamic> y = raw.row(0).array();
    if (cache) cache->inputs.push_back(std::move(act));
    if (cache) cache->raw_out = y;
    if (cfg.clamp_output) {
        const S c = static_cast<S>(cfg.clamp_value);
        y = y.min(c).max(-c);
    }
    if (cache) cache->out = y;
    return y;
}

// Reverse pass for d(sum_i w_i * y_i)/d(everything), where dy holds the w_i.
// Any of grads/dcoords/dz may be null. grads must be pre-sized (zero or
// accumulated into); dz accumulates the latent contribution summed over the
// batch and every injection site.
template <typename S>
void backward_batch(const AutoDecoderParams<S>& p, const NetworkConfig& cfg,
                    const ForwardCache<S>& cache,
                    const Eigen::Array<S, 1, Eigen::Dynamic>& dy, Gradients<S>* grads,
                    Mat<S>* dcoords, Vec<S>* dz) {
    const auto B = cache.coords.cols();
    const S omega = static_cast<S>(cfg.omega);
    Eigen::Array<S, 1, Eigen::Dynamic> dout = dy;
    if (cfg.clamp_output) {
        const S c = static_cast<S>(cfg.clamp_value);
        dout = dout * ((cache.raw_out.abs() < c).template cast<S>());
    }
    if (dcoords) dcoords->setZero(NetworkConfig::kCoordDim, B);
    if (dz) dz->setZero(cfg.latent_dim);

    // Output layer (linear).
    Mat<S> g = dout.matrix();  // 1 x B
    const int last = cfg.hidden_layers;  // index of output layer - 1
    if (grads) {
        grads->weights[last].noalias() += g * cache.inputs[last].transpose();
        grads->biases[last].noalias() += g.rowwise().sum();
    }
    Mat<S> dact = p.weights[last].transpose() * g;  // hidden_width x B

    for (int l = cfg.hidden_layers; l >= 1; --l) {
        Mat<S> dpre;
        if (cfg.activation == Activation::sine)
            dpre = dact.array() * (omega * (omega * cache.preacts[l - 1].array()).cos());
        else
            dpre = dact.array() * (cache.preacts[l - 1].array() > S(0)).template cast<S>();
        if (grads) {
            grads->weights[l - 1].noalias() += dpre * cache.inputs[l - 1].transpose();
            grads->biases[l - 1].noalias() += dpre.rowwise().sum();
        }
        Mat<S> din = p.weights[l - 1].transpose() * dpre;
        if (l == 1) {
            if (dcoords) *dcoords += din.topRows(NetworkConfig::kCoordDim);
            if (dz) *dz += din.bottomRows(cfg.latent_dim).rowwise().sum();
        } else {
            int row = cfg.hidden_width;
            dact = din.topRows(cfg.hidden_width);
            if (cfg.coords_to_all_layers) {
                if (dcoords) *dcoords += din.middleRows(row, NetworkConfig::kCoordDim);
                row += NetworkConfig::kCoordDim;
            }
            if (cfg.injects_latent(l) && dz)
                *dz += din.middleRows(row, cfg.latent_dim).rowwise().sum();
        }
    }
}

template <typename S>
Gradients<S> zero_gradients(const AutoDecoderParams<S>& p, const NetworkConfig& cfg) {
    Gradients<S> g;
    for (const auto& w : p.weights) g.weights.push_back(Mat<S>::Zero(w.rows(), w.cols()));
    for (const auto& b : p.biases) g.biases.push_back(Vec<S>::Zero(b.size()));
    g.latent = Vec<S>::Zero(cfg.latent_dim);
    return g;
}

// Pointwise forward.
template <typename S>
S forward(const AutoDecoderParams<S>& p, const NetworkConfig& cfg, const Vec3& x, double t,
          const Eigen::Ref<const Vec<S>>& z) {
    Mat<S> coords(NetworkConfig::kCoordDim, 1);
    coords << static_cast<S>(x[0]), static_cast<S>(x[1]), static_cast<S>(x[2]),
        static_cast<S>(t);
    return forward_batch<S>(p, cfg, coords, z)(0);
}

// Exact d f / d (x,y,z) via the same graph as forward.
template <typename S>
Vec3 spatial_gradient(const AutoDecoderParams<S>& p, const NetworkConfig& cfg, const Vec3& x,
                      double t, const Eigen::Ref<const Vec<S>>& z) {
    Mat<S> coords(NetworkConfig::kCoordDim, 1);
    coords << static_cast<S>(x[0]), static_cast<S>(x[1]), static_cast<S>(x[2]),
        static_cast<S>(t);
    ForwardCache<S> cache;
    forward_batch<S>(p, cfg, coords, z, &cache);
    Eigen::Array<S, 1, Eigen::Dynamic> dy(1, 1);
    dy(0) = S(1);
    Mat<S> dcoords;
    backward_batch<S>(p, cfg, cache, dy, nullptr, &dcoords, nullptr);
    return {static_cast<double>(dcoords(0, 0)), static_cast<double>(dcoords(1, 0)),
            static_cast<double>(dcoords(2, 0))};
}

struct LossTerms {
    double total = 0.0;
    double recon = 0.0;
    double code = 0.0;
};

// Two-term loss on one mini-batch from a single sequence:
//   mean_i |f(x_i, t_i, z) - sdf_i|  +  (1/sigma^2) ||z||^2.
// Gradients are exact for this value; the L1 subgradient at 0 is 0.
template <typename S>
LossTerms loss_and_gradients(const AutoDecoderParams<S>& p, const NetworkConfig& cfg,
                             const LossConfig& loss_cfg,
                             const Eigen::Ref<const Mat<S>>& coords,
                             const Eigen::Ref<const Vec<S>>& targets, int sequence_id,
                             Gradients<S>* grads) {
    loss_cfg.validate();
    if (coords.cols() == 0) throw ValidationError("loss: empty batch");
    if (sequence_id < 0 || sequence_id >= p.num_sequences())
        throw ValidationError("loss: unknown sequence id");
    const auto B = coords.cols();
    Vec<S> z = p.latent_codes.row(sequence_id).transpose();

    ForwardCache<S> cache;
    auto y = forward_batch<S>(p, cfg, coords, z, &cache);
    Eigen::Array<S, 1, Eigen::Dynamic> residual = y - targets.transpose().array();

    LossTerms terms;
    terms.recon = static_cast<double>(residual.abs().sum()) / static_cast<double>(B);
    const double inv_s2 = 1.0 / (loss_cfg.sigma * loss_cfg.sigma);
    terms.code = inv_s2 * static_cast<double>(z.squaredNorm());
    terms.total = terms.recon + terms.code;

    if (grads) {
        Eigen::Array<S, 1, Eigen::Dynamic> dy =
            residual.sign() / static_cast<S>(static_cast<double>(B));
        Vec<S> dz;
        backward_batch<S>(p, cfg, cache, dy, grads, nullptr, &dz);
        grads->latent += dz + static_cast<S>(2.0 * inv_s2) * z;
    }
    return terms;
}

}  // namespace nsc
