#include "nsc/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace nsc {

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
    if (epoch < 0) throw ValidationError("lr_at_epoch: negative epoch");
    return cfg.lr * std::pow(cfg.lr_decay_factor, epoch / cfg.lr_decay_every);
}

namespace {

template <typename S, typename TensorA, typename TensorB>
void adam_update(TensorA& param, const TensorB& grad, TensorA& m, TensorA& v,
                 std::int64_t step, double lr, double beta1, double beta2, double eps,
                 const char* name) {
    if (!grad.allFinite()) throw NumericalError(std::string("adam: non-finite gradient in ") + name);
    const S b1 = static_cast<S>(beta1), b2 = static_cast<S>(beta2);
    m = b1 * m + (S(1) - b1) * grad;
    v.array() = b2 * v.array() + (S(1) - b2) * grad.array().square();
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    param.array() -= static_cast<S>(lr / bc1) * m.array() /
                     ((v.array() / static_cast<S>(bc2)).sqrt() + static_cast<S>(eps));
}

}  // namespace

template <typename S>
void adam_step(AutoDecoderParams<S>& params, const Gradients<S>& grads, AdamState<S>& state,
               int sequence_id, double lr, double beta1, double beta2, double eps) {
    ++state.step;
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        adam_update<S>(params.weights[l], grads.weights[l], state.m_w[l], state.v_w[l],
                       state.step, lr, beta1, beta2, eps, "weights");
        adam_update<S>(params.biases[l], grads.biases[l], state.m_b[l], state.v_b[l],
                       state.step, lr, beta1, beta2, eps, "biases");
    }
    if (sequence_id >= 0) {
        auto row = params.latent_codes.row(sequence_id).transpose();
        auto m = state.m_z.row(sequence_id).transpose();
        auto v = state.v_z.row(sequence_id).transpose();
        std::int64_t zstep = ++state.z_steps[static_cast<std::size_t>(sequence_id)];
        adam_update<S>(row, grads.latent, m, v, zstep, lr, beta1, beta2, eps, "latent_codes");
    }
}

template void adam_step<double>(AutoDecoderParams<double>&, const Gradients<double>&,
                                AdamState<double>&, int, double, double, double, double);
template void adam_step<float>(AutoDecoderParams<float>&, const Gradients<float>&,
                               AdamState<float>&, int, double, double, double, double);

namespace {

template <typename S>
struct SequenceData {
    Mat<S> coords;   // 4 x M
    Vec<S> targets;  // M
};

template <typename S>
std::vector<SequenceData<S>> pack_dataset(const std::vector<SdfSampleSet>& dataset) {
    std::vector<SequenceData<S>> out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& samples = dataset[i].samples;
        if (samples.empty()) throw ValidationError("train: empty sample set");
        out[i].coords.resize(4, static_cast<Eigen::Index>(samples.size()));
        out[i].targets.resize(static_cast<Eigen::Index>(samples.size()));
        for (std::size_t j = 0; j < samples.size(); ++j) {
            auto c = static_cast<Eigen::Index>(j);
            out[i].coords(0, c) = static_cast<S>(samples[j].x);
            out[i].coords(1, c) = static_cast<S>(samples[j].y);
            out[i].coords(2, c) = static_cast<S>(samples[j].z);
            out[i].coords(3, c) = static_cast<S>(samples[j].t);
            out[i].targets(c) = static_cast<S>(samples[j].sdf);
        }
    }
    return out;
}

template <typename S>
TrainResult train_impl(const std::vector<SdfSampleSet>& dataset, const NetworkConfig& net_cfg,
                       const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                       const CheckpointSink& sink, const AutoDecoderParams<double>* initial,
                       const AdamState<double>* initial_adam) {
    const int n_seq = static_cast<int>(dataset.size());
    AutoDecoderParams<S> params;
    if (initial) {
        if (initial->num_sequences() != n_seq)
            throw ValidationError("train: initial params have wrong sequence count");
        params = initial->template cast<S>();
    } else {
        params = init_params<S>(net_cfg, n_seq, derive_seed(train_cfg.seed, 0));
    }
    AdamState<S> state =
        initial_adam ? initial_adam->template cast<S>() : AdamState<S>::init(params);
    auto data = pack_dataset<S>(dataset);

    std::vector<int> order(static_cast<std::size_t>(n_seq));
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    for (int epoch = train_cfg.start_epoch; epoch < train_cfg.epochs; ++epoch) {
        const double lr = lr_at_epoch(train_cfg, epoch);
        // Epoch-indexed seed stream (counter 3 + epoch): a resumed run replays
        // the exact shuffles and batch draws of the uninterrupted one.
        Rng rng(derive_seed(train_cfg.seed, 3 + static_cast<std::uint64_t>(epoch)));
        // Fisher-Yates with the epoch RNG keeps the visit order reproducible.
        for (int i = n_seq - 1; i > 0; --i)
            std::swap(order[static_cast<std::size_t>(i)],
                      order[rng.integer(static_cast<std::uint64_t>(i + 1))]);
        const int visits = train_cfg.sequences_per_epoch > 0
                               ? std::min(train_cfg.sequences_per_epoch, n_seq)
                               : n_seq;

        EpochStats stats;
        stats.epoch = epoch;
        stats.lr = lr;
        int steps = 0;
        for (int vi = 0; vi < visits; ++vi) {
            const int seq = order[static_cast<std::size_t>(vi)];
            const auto& sd = data[static_cast<std::size_t>(seq)];
            const auto M = sd.coords.cols();
            const int batch = std::min<Eigen::Index>(train_cfg.batch_points, M);
            const int n_batches =
                train_cfg.batches_per_sequence > 0
                    ? train_cfg.batches_per_sequence
                    : static_cast<int>((M + batch - 1) / batch);
            for (int bi = 0; bi < n_batches; ++bi) {
                Mat<S> coords(4, batch);
                Vec<S> targets(batch);
                for (int j = 0; j < batch; ++j) {
                    auto idx = static_cast<Eigen::Index>(
                        rng.integer(static_cast<std::uint64_t>(M)));
                    coords.col(j) = sd.coords.col(idx);
                    targets(j) = sd.targets(idx);
                }
                Gradients<S> grads = zero_gradients(params, net_cfg);
                LossTerms terms =
                    loss_and_gradients<S>(params, net_cfg, loss_cfg, coords, targets, seq, &grads);
                if (!std::isfinite(terms.total))
                    throw NumericalError("train: loss diverged (non-finite)");
                adam_step<S>(params, grads, state, seq, lr, train_cfg.beta1, train_cfg.beta2,
                             train_cfg.eps);
                stats.mean_loss += terms.total;
                stats.recon_term += terms.recon;
                stats.code_term += terms.code;
                ++steps;
            }
        }
        if (steps > 0) {
            stats.mean_loss /= steps;
            stats.recon_term /= steps;
            stats.code_term /= steps;
        }
        result.history.push_back(stats);
        if (sink && ((epoch + 1) % train_cfg.checkpoint_every == 0 ||
                     epoch + 1 == train_cfg.epochs)) {
            if constexpr (std::is_same_v<S, double>)
                sink(epoch, params, state, result.history);
            else
                sink(epoch, params.template cast<double>(), state.template cast<double>(),
                     result.history);
        }
    }
    if constexpr (std::is_same_v<S, double>)
        result.params = std::move(params);
    else
        result.params = params.template cast<double>();
    return result;
}

}  // namespace

TrainResult train(const std::vector<SdfSampleSet>& dataset, const NetworkConfig& net_cfg,
                  const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                  const CheckpointSink& sink, const AutoDecoderParams<double>* initial,
                  const AdamState<double>* initial_adam) {
    if (dataset.empty()) throw ValidationError("train: empty dataset");
    net_cfg.validate();
    loss_cfg.validate();
    train_cfg.validate();
    if (train_cfg.epochs <= train_cfg.start_epoch) {
        TrainResult r;
        r.params = initial ? *initial
                           : init_params<double>(net_cfg, static_cast<int>(dataset.size()),
                                                 derive_seed(train_cfg.seed, 0));
        return r;
    }
    if (train_cfg.use_f32)
        return train_impl<float>(dataset, net_cfg, loss_cfg, train_cfg, sink, initial,
                                 initial_adam);
    return train_impl<double>(dataset, net_cfg, loss_cfg, train_cfg, sink, initial,
                              initial_adam);
}

Vec<double> fit_latent(const AutoDecoderParams<double>& params, const NetworkConfig& net_cfg,
                       const LossConfig& loss_cfg, const TrainConfig& train_cfg,
                       const SdfSampleSet& samples) {
    net_cfg.validate();
    train_cfg.validate();
    if (samples.samples.empty()) throw ValidationError("fit_latent: empty sample set");

    // Single-sequence problem with frozen theta: reuse the training loop
    // machinery on a copy whose only free parameter bank we read back.
    AutoDecoderParams<double> p = params;
    p.latent_codes = Mat<double>::Zero(1, net_cfg.latent_dim);
    AdamState<double> state = AdamState<double>::init(p);
    Rng rng(derive_seed(train_cfg.seed, 2));

    std::vector<SdfSampleSet> one{samples};
    auto data = pack_dataset<double>(one);
    const auto& sd = data[0];
    const auto M = sd.coords.cols();
    const int batch = std::min<Eigen::Index>(train_cfg.batch_points, M);
    const int n_batches = train_cfg.batches_per_sequence > 0
                              ? train_cfg.batches_per_sequence
                              : static_cast<int>((M + batch - 1) / batch);

    for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        const double lr = lr_at_epoch(train_cfg, epoch);
        for (int bi = 0; bi < n_batches; ++bi) {
            Mat<double> coords(4, batch);
            Vec<double> targets(batch);
            for (int j = 0; j < batch; ++j) {
                auto idx = static_cast<Eigen::Index>(rng.integer(static_cast<std::uint64_t>(M)));
                coords.col(j) = sd.coords.col(idx);
                targets(j) = sd.targets(idx);
            }
            Gradients<double> grads = zero_gradients(p, net_cfg);
            LossTerms terms =
                loss_and_gradients<double>(p, net_cfg, loss_cfg, coords, targets, 0, &grads);
            if (!std::isfinite(terms.total))
                throw NumericalError("fit_latent: loss diverged (non-finite)");
            // Theta stays frozen: only the latent row receives an update.
            for (auto& gw : grads.weights) gw.setZero();
            for (auto& gb : grads.biases) gb.setZero();
            adam_step<double>(p, grads, state, 0, lr, train_cfg.beta1, train_cfg.beta2,
                              train_cfg.eps);
        }
    }
    return p.latent_codes.row(0).transpose();
}

void write_loss_history_csv(const std::vector<EpochStats>& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "epoch,lr,mean_loss,recon_term,code_term\n";
    char buf[160];
    for (const auto& row : history) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", row.epoch, row.lr,
                      row.mean_loss, row.recon_term, row.code_term);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace nsc
