#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maivar/neural/adam.hpp"
#include "maivar/neural/mlp.hpp"

namespace maivar::nn {

struct TrainConfig {
    double learning_rate = 3e-4;
    std::size_t batch_size = 16;
    std::size_t epochs = 100;
    double l1_lambda = 0.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    bool shuffle = true;
};

void validate(const TrainConfig& cfg);

struct Dataset {
    Matrix inputs;  // samples x d_in
    std::vector<int> labels;

    std::size_t size() const noexcept { return labels.size(); }
};

struct EpochMetrics {
    std::size_t epoch = 0;  // 1-based
    double loss = 0.0;      // sample-weighted mean of batch losses
    double accuracy = 0.0;  // on the batches as seen during the sweep
    std::optional<double> eval_accuracy;
};

struct TrainResult {
    MlpModel model;
    AdamState optimizer;
    std::vector<EpochMetrics> metrics;
};

// Minibatch Adam. Epoch e shuffles with a stream derived from (seed, e);
// batches take samples in that order, the last batch may be short.
// When `eval` is given its accuracy is recorded after every epoch.
TrainResult train(MlpModel model, const Dataset& data, const TrainConfig& cfg, const Dataset* eval = nullptr);

// Fraction of samples whose argmax logit equals the label. Throws EmptyDataset.
double evaluate(const MlpModel& model, const Dataset& data);

std::vector<std::size_t> predict(const MlpModel& model, const Matrix& inputs);

// CSV `epoch,loss,accuracy`.
std::string metrics_csv(const std::vector<EpochMetrics>& metrics);

}  // namespace maivar::nn
