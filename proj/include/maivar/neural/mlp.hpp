#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maivar/neural/matrix.hpp"

namespace maivar::nn {

// Fully connected layer; weights are out x in.
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;
    std::vector<double> biases;

    double& w(std::size_t o, std::size_t i) noexcept { return weights[o * in + i]; }
    double w(std::size_t o, std::size_t i) const noexcept { return weights[o * in + i]; }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// ReLU on every hidden layer, identity on the output layer.
struct MlpModel {
    std::vector<std::size_t> layer_dims;  // d_in, h_1, ..., n_classes
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const noexcept { return layer_dims.empty() ? 0 : layer_dims.front(); }
    std::size_t n_classes() const noexcept { return layer_dims.empty() ? 0 : layer_dims.back(); }
    std::size_t parameter_count() const noexcept;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// All-zero parameters. Throws ShapeError on fewer than two dims or a zero dim.
MlpModel make_model(std::span<const std::size_t> dims);

// Per-layer uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
MlpModel init_model(std::span<const std::size_t> dims, std::uint64_t seed);

// Uniform fan-scaled init for one layer shape, drawn in row-major order.
std::vector<double> init_weights(std::size_t out, std::size_t in, std::uint64_t seed);

// Throws ShapeError on inconsistent dims, InvalidParameter on non-finite values.
void validate(const MlpModel& model);

// Logits, batch x n_classes. Each pre-activation accumulates inputs in
// index order starting from 0 and adds the bias last.
Matrix forward(const MlpModel& model, const Matrix& inputs);

// Row-wise numerically stable softmax.
Matrix softmax(const Matrix& logits);

struct LabeledBatch {
    Matrix inputs;
    std::vector<int> labels;
};

// Parameter-shaped container used for gradients and optimizer moments.
struct ParamBuffers {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

ParamBuffers zeros_like(const MlpModel& model);

struct LossResult {
    double loss = 0.0;       // data_loss + l1_term
    double data_loss = 0.0;  // mean cross-entropy
    double l1_term = 0.0;    // lambda * sum |W|
    ParamBuffers grads;
    Matrix logits;
};

// Mean softmax cross-entropy plus lambda * sum |W| over weight matrices
// (biases excluded, subgradient 0 at w = 0). Throws EmptyBatch, ShapeError.
LossResult loss_and_gradients(const MlpModel& model, const LabeledBatch& batch, double l1_lambda);

// Loss value only; same arithmetic as loss_and_gradients.
double loss_value(const MlpModel& model, const LabeledBatch& batch, double l1_lambda);

// Lowest index wins ties.
std::size_t argmax(std::span<const double> values) noexcept;

}  // namespace maivar::nn
