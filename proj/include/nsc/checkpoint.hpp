#pragma once

#include <string>

#include "nsc/network.hpp"
#include "nsc/train.hpp"

namespace nsc {

struct Checkpoint {
    NetworkConfig net;
    LossConfig loss;
    int epoch = 0;
    double final_loss = 0.0;
    AutoDecoderParams<double> params;
    // Optimizer moments travel with intermediate checkpoints so training can
    // resume exactly; final/exported checkpoints may omit them.
    bool has_optimizer = false;
    AdamState<double> adam;
};

// Container: magic "NSCK", u32 version, u64 header length, JSON header
// (NetworkConfig, LossConfig, epoch, loss summary, tensor manifest), then a
// little-endian f64 payload: per layer weights (row-major) and bias, then
// the latent code bank (row-major). When the header carries an "optimizer"
// object, the payload continues with Adam m/v in the same tensor order.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace nsc
