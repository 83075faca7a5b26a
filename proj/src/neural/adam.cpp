#include "maivar/neural/adam.hpp"

#include <cmath>

#include "maivar/core/errors.hpp"

namespace maivar::nn {

namespace {

bool mirrors(const ParamBuffers& buf, const MlpModel& model) {
    if (buf.weights.size() != model.layers.size() || buf.biases.size() != model.layers.size()) return false;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        if (buf.weights[l].size() != model.layers[l].weights.size() ||
            buf.biases[l].size() != model.layers[l].biases.size())
            return false;
    }
    return true;
}

void update(std::vector<double>& params, const std::vector<double>& grads, std::vector<double>& m,
            std::vector<double>& v, double lr, double c1, double c2, const AdamConfig& cfg) {
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double g = grads[k];
        m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
        v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m[k] / c1;
        const double v_hat = v[k] / c2;
        params[k] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
}

}  // namespace

AdamState make_adam_state(const MlpModel& model) { return {zeros_like(model), zeros_like(model), 0}; }

void adam_step(MlpModel& model, const ParamBuffers& grads, AdamState& state, double lr, const AdamConfig& cfg) {
    if (!mirrors(grads, model) || !mirrors(state.m, model) || !mirrors(state.v, model))
        throw ShapeError("Adam buffers do not mirror the model");
    ++state.t;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        update(model.layers[l].weights, grads.weights[l], state.m.weights[l], state.v.weights[l], lr, c1, c2, cfg);
        update(model.layers[l].biases, grads.biases[l], state.m.biases[l], state.v.biases[l], lr, c1, c2, cfg);
    }
}

}  // namespace maivar::nn
