#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsc/network.hpp"
#include "nsc/samples.hpp"

namespace nsc {

struct TrainConfig {
    int epochs = 1250;
    double lr = 1e-4;
    double lr_decay_factor = 0.5;
    int lr_decay_every = 100;
    int batch_points = 4096;
    int batches_per_sequence = 0;  // 0 = cover each sample set once per epoch
    int sequences_per_epoch = 0;   // 0 = all
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    bool use_f32 = false;  // production speed mode; tests train in f64
    int checkpoint_every = 100;
    int start_epoch = 0;  // nonzero when resuming from a checkpoint
    std::uint64_t seed = 0;

    void validate() const {
        if (epochs < 0) throw ValidationError("train: epochs must be >= 0");
        if (start_epoch < 0) throw ValidationError("train: start_epoch must be >= 0");
        if (lr <= 0.0) throw ValidationError("train: lr must be positive");
        if (lr_decay_factor <= 0.0 || lr_decay_factor > 1.0)
            throw ValidationError("train: lr_decay_factor outside (0,1]");
        if (lr_decay_every < 1) throw ValidationError("train: lr_decay_every must be >= 1");
        if (batch_points < 1) throw ValidationError("train: batch_points must be >= 1");
    }
};

// Piecewise-constant schedule: lr * factor^floor(epoch / decay_every).
double lr_at_epoch(const TrainConfig& cfg, int epoch);

// Adam moments congruent with AutoDecoderParams. Latent rows keep their own
// step counters since a row is only updated when its sequence is sampled.
template <typename S>
struct AdamState {
    std::vector<Mat<S>> m_w, v_w;
    std::vector<Vec<S>> m_b, v_b;
    Mat<S> m_z, v_z;
    std::int64_t step = 0;
    std::vector<std::int64_t> z_steps;

    static AdamState init(const AutoDecoderParams<S>& p) {
        AdamState st;
        for (const auto& w : p.weights) {
            st.m_w.push_back(Mat<S>::Zero(w.rows(), w.cols()));
            st.v_w.push_back(Mat<S>::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : p.biases) {
            st.m_b.push_back(Vec<S>::Zero(b.size()));
            st.v_b.push_back(Vec<S>::Zero(b.size()));
        }
        st.m_z = Mat<S>::Zero(p.latent_codes.rows(), p.latent_codes.cols());
        st.v_z = Mat<S>::Zero(p.latent_codes.rows(), p.latent_codes.cols());
        st.z_steps.assign(static_cast<std::size_t>(p.latent_codes.rows()), 0);
        return st;
    }

    template <typename T>
    AdamState<T> cast() const {
        AdamState<T> out;
        for (const auto& w : m_w) out.m_w.push_back(w.template cast<T>());
        for (const auto& w : v_w) out.v_w.push_back(w.template cast<T>());
        for (const auto& b : m_b) out.m_b.push_back(b.template cast<T>());
        for (const auto& b : v_b) out.v_b.push_back(b.template cast<T>());
        out.m_z = m_z.template cast<T>();
        out.v_z = v_z.template cast<T>();
        out.step = step;
        out.z_steps = z_steps;
        return out;
    }
};

// One bias-corrected Adam step on all network tensors and, when
// sequence_id >= 0, on that sequence's latent row. Throws NumericalError
// naming the offending tensor on non-finite gradients.
template <typename S>
void adam_step(AutoDecoderParams<S>& params, const Gradients<S>& grads, AdamState<S>& state,
               int sequence_id, double lr, double beta1, double beta2, double eps);

struct EpochStats {
    int epoch = 0;
    double lr = 0.0;
    double mean_loss = 0.0;
    double recon_term = 0.0;
    double code_term = 0.0;
};

struct TrainResult {
    AutoDecoderParams<double> params;
    std::vector<EpochStats> history;
};

// Called at checkpoint epochs with the full optimizer state so the run can
// be resumed exactly.
using CheckpointSink =
    std::function<void(int epoch, const AutoDecoderParams<double>&, const AdamState<double>&,
                       const std::vector<EpochStats>&)>;

// Joint optimization of theta and the per-sequence latent codes. Each epoch
// visits the sequences in shuffled order; each visit runs enough uniform
// mini-batches to cover the sequence's sample set once. The per-epoch RNG is
// derived from (seed, epoch), so resuming from (initial, initial_adam) at
// start_epoch reproduces the uninterrupted run bit for bit.
TrainResult train(const std::vector<SdfSampleSet>& dataset, const NetworkConfig& net_cfg,
                  const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                  const CheckpointSink& sink = nullptr,
                  const AutoDecoderParams<double>* initial = nullptr,
                  const AdamState<double>* initial_adam = nullptr);

// Optimizes a fresh latent code from zero against a new sample set with the
// network weights frozen.
Vec<double> fit_latent(const AutoDecoderParams<double>& params, const NetworkConfig& net_cfg,
                       const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                       const SdfSampleSet& samples);

void write_loss_history_csv(const std::vector<EpochStats>& history, const std::string& path);

}  // namespace nsc
