#pragma once

#include <cstdint>

#include "maivar/neural/mlp.hpp"

namespace maivar::nn {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    ParamBuffers m;
    ParamBuffers v;
    std::uint64_t t = 0;
};

AdamState make_adam_state(const MlpModel& model);

// m <- b1 m + (1 - b1) g;  v <- b2 v + (1 - b2) g^2;
// w <- w - lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments.
// Increments t once. Throws ShapeError if buffers do not mirror the model.
void adam_step(MlpModel& model, const ParamBuffers& grads, AdamState& state, double lr, const AdamConfig& cfg = {});

}  // namespace maivar::nn
