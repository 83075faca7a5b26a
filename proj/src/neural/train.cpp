#include "maivar/neural/train.hpp"

#include <numeric>
#include <sstream>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::nn {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;

LabeledBatch gather(const Dataset& data, std::span<const std::size_t> indices) {
    LabeledBatch batch;
    batch.inputs = Matrix(indices.size(), data.inputs.cols);
    batch.labels.resize(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = data.inputs.row(indices[r]);
        std::copy(src.begin(), src.end(), batch.inputs.row(r).begin());
        batch.labels[r] = data.labels[indices[r]];
    }
    return batch;
}

void check_dataset(const MlpModel& model, const Dataset& data) {
    if (data.size() == 0) throw EmptyDataset("dataset is empty");
    if (data.inputs.rows != data.size()) throw ShapeError("dataset inputs and labels differ in length");
    if (data.inputs.cols != model.input_dim()) throw ShapeError("dataset dim does not match model input dim");
}

}  // namespace

void validate(const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0)) throw InvalidParameter("learning_rate must be positive");
    if (cfg.batch_size == 0) throw InvalidParameter("batch_size must be at least 1");
    if (!(cfg.l1_lambda >= 0.0)) throw InvalidParameter("l1_lambda must be non-negative");
}

TrainResult train(MlpModel model, const Dataset& data, const TrainConfig& cfg, const Dataset* eval) {
    validate(cfg);
    validate(model);
    check_dataset(model, data);

    const AdamConfig adam{cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps};
    TrainResult result{std::move(model), {}, {}};
    result.optimizer = make_adam_state(result.model);

    std::vector<std::size_t> order(data.size());
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (cfg.shuffle) Rng(derive_seed(derive_seed(cfg.seed, kShuffleStream), epoch)).shuffle(std::span(order));

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, order.size() - start);
            const auto batch = gather(data, std::span(order).subspan(start, len));
            const auto step = loss_and_gradients(result.model, batch, cfg.l1_lambda);
            loss_sum += step.loss * static_cast<double>(len);
            for (std::size_t r = 0; r < len; ++r)
                if (argmax(step.logits.row(r)) == static_cast<std::size_t>(batch.labels[r])) ++correct;
            adam_step(result.model, step.grads, result.optimizer, cfg.learning_rate, adam);
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.loss = loss_sum / static_cast<double>(data.size());
        m.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
        if (eval != nullptr) m.eval_accuracy = evaluate(result.model, *eval);
        result.metrics.push_back(m);
    }
    return result;
}

std::vector<std::size_t> predict(const MlpModel& model, const Matrix& inputs) {
    const Matrix logits = forward(model, inputs);
    std::vector<std::size_t> out(logits.rows);
    for (std::size_t r = 0; r < logits.rows; ++r) out[r] = argmax(logits.row(r));
    return out;
}

double evaluate(const MlpModel& model, const Dataset& data) {
    check_dataset(model, data);
    const auto preds = predict(model, data.inputs);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == static_cast<std::size_t>(data.labels[i])) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::string metrics_csv(const std::vector<EpochMetrics>& metrics) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,loss,accuracy\n";
    for (const auto& m : metrics) out << m.epoch << ',' << m.loss << ',' << m.accuracy << '\n';
    return out.str();
}

}  // namespace maivar::nn
