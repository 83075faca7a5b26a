#include "maivar/neural/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maivar/core/errors.hpp"
#include "maivar/core/rng.hpp"

namespace maivar::nn {

namespace {

constexpr std::size_t kRowBlock = 32;

void check_dims(std::span<const std::size_t> dims) {
    if (dims.size() < 2) throw ShapeError("an MLP needs at least input and output dims");
    for (auto d : dims) {
        if (d == 0) throw ShapeError("MLP layer dims must be positive");
    }
}

// out = act(in * W^T + b) for one layer. W is transposed once so the inner
// loop runs over outputs; every output still sums inputs in index order.
Matrix affine(const DenseLayer& layer, const Matrix& input, bool relu) {
    const std::size_t n = input.rows;
    std::vector<double> wt(layer.in * layer.out);
    for (std::size_t o = 0; o < layer.out; ++o)
        for (std::size_t i = 0; i < layer.in; ++i) wt[i * layer.out + o] = layer.weights[o * layer.in + i];

    Matrix z(n, layer.out, 0.0);
    for (std::size_t block = 0; block < layer.in; block += kRowBlock) {
        const std::size_t end = std::min(block + kRowBlock, layer.in);
        for (std::size_t b = 0; b < n; ++b) {
            double* zr = z.data.data() + b * layer.out;
            const double* xr = input.data.data() + b * layer.in;
            for (std::size_t i = block; i < end; ++i) {
                const double xi = xr[i];
                const double* wr = wt.data() + i * layer.out;
                for (std::size_t o = 0; o < layer.out; ++o) zr[o] += xi * wr[o];
            }
        }
    }
    for (std::size_t b = 0; b < n; ++b) {
        double* zr = z.data.data() + b * layer.out;
        for (std::size_t o = 0; o < layer.out; ++o) {
            const double v = zr[o] + layer.biases[o];
            zr[o] = relu ? (v > 0.0 ? v : 0.0) : v;
        }
    }
    return z;
}

void check_batch(const MlpModel& model, const LabeledBatch& batch) {
    if (batch.labels.empty() || batch.inputs.rows == 0) throw EmptyBatch("loss needs a non-empty batch");
    if (batch.inputs.rows != batch.labels.size()) throw ShapeError("batch inputs and labels differ in length");
    for (int y : batch.labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= model.n_classes())
            throw ShapeError("label " + std::to_string(y) + " outside [0, n_classes)");
    }
}

// Per-sample -log softmax(z)[y], max-subtracted.
double cross_entropy_row(std::span<const double> z, int label) {
    const double peak = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - peak);
    return std::log(sum) - (z[static_cast<std::size_t>(label)] - peak);
}

double l1_sum(const MlpModel& model) {
    double acc = 0.0;
    for (const auto& layer : model.layers)
        for (double w : layer.weights) acc += std::abs(w);
    return acc;
}

}  // namespace

std::size_t MlpModel::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

MlpModel make_model(std::span<const std::size_t> dims) {
    check_dims(dims);
    MlpModel model;
    model.layer_dims.assign(dims.begin(), dims.end());
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        layer.weights.assign(layer.in * layer.out, 0.0);
        layer.biases.assign(layer.out, 0.0);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

std::vector<double> init_weights(std::size_t out, std::size_t in, std::uint64_t seed) {
    Rng rng(seed);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    std::vector<double> w(out * in);
    for (auto& v : w) v = rng.uniform(-bound, bound);
    return w;
}

MlpModel init_model(std::span<const std::size_t> dims, std::uint64_t seed) {
    MlpModel model = make_model(dims);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        layer.weights = init_weights(layer.out, layer.in, derive_seed(seed, l));
    }
    return model;
}

void validate(const MlpModel& model) {
    check_dims(model.layer_dims);
    if (model.layers.size() + 1 != model.layer_dims.size()) throw ShapeError("layer count does not match dims");
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& layer = model.layers[l];
        if (layer.in != model.layer_dims[l] || layer.out != model.layer_dims[l + 1] ||
            layer.weights.size() != layer.in * layer.out || layer.biases.size() != layer.out)
            throw ShapeError("layer " + std::to_string(l) + " is inconsistent with model dims");
        for (double v : layer.weights)
            if (!std::isfinite(v)) throw InvalidParameter("non-finite weight in layer " + std::to_string(l));
        for (double v : layer.biases)
            if (!std::isfinite(v)) throw InvalidParameter("non-finite bias in layer " + std::to_string(l));
    }
}

Matrix forward(const MlpModel& model, const Matrix& inputs) {
    if (model.layers.empty()) throw ShapeError("model has no layers");
    if (inputs.cols != model.input_dim()) {
        throw ShapeError("input dim " + std::to_string(inputs.cols) + " does not match model input dim " +
                         std::to_string(model.input_dim()));
    }
    Matrix act = inputs;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        act = affine(model.layers[l], act, l + 1 < model.layers.size());
    }
    return act;
}

Matrix softmax(const Matrix& logits) {
    Matrix p = logits;
    for (std::size_t r = 0; r < p.rows; ++r) {
        auto row = p.row(r);
        const double peak = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (auto& v : row) {
            v = std::exp(v - peak);
            sum += v;
        }
        for (auto& v : row) v /= sum;
    }
    return p;
}

ParamBuffers zeros_like(const MlpModel& model) {
    ParamBuffers buf;
    for (const auto& layer : model.layers) {
        buf.weights.emplace_back(layer.weights.size(), 0.0);
        buf.biases.emplace_back(layer.biases.size(), 0.0);
    }
    return buf;
}

LossResult loss_and_gradients(const MlpModel& model, const LabeledBatch& batch, double l1_lambda) {
    check_batch(model, batch);
    const std::size_t n = batch.inputs.rows;
    const std::size_t depth = model.layers.size();
    if (batch.inputs.cols != model.input_dim()) throw ShapeError("batch input dim does not match model");

    // activations[l] is the input to layer l; activations[depth] the logits.
    std::vector<Matrix> activations;
    activations.reserve(depth + 1);
    activations.push_back(batch.inputs);
    for (std::size_t l = 0; l < depth; ++l)
        activations.push_back(affine(model.layers[l], activations.back(), l + 1 < depth));

    LossResult result;
    result.logits = activations.back();
    const double inv_n = 1.0 / static_cast<double>(n);

    Matrix delta = softmax(result.logits);
    double data_loss = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        data_loss += cross_entropy_row(result.logits.row(b), batch.labels[b]);
        delta.at(b, static_cast<std::size_t>(batch.labels[b])) -= 1.0;
        for (auto& v : delta.row(b)) v *= inv_n;
    }
    result.data_loss = data_loss * inv_n;
    result.l1_term = l1_lambda * l1_sum(model);
    result.loss = result.data_loss + result.l1_term;

    result.grads = zeros_like(model);
    for (std::size_t l = depth; l-- > 0;) {
        const auto& layer = model.layers[l];
        const Matrix& input = activations[l];
        auto& gw = result.grads.weights[l];
        auto& gb = result.grads.biases[l];
        for (std::size_t b = 0; b < n; ++b) {
            const double* dz = delta.data.data() + b * layer.out;
            const double* x = input.data.data() + b * layer.in;
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = dz[o];
                gb[o] += d;
                if (d == 0.0) continue;
                double* g = gw.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) g[i] += d * x[i];
            }
        }
        if (l1_lambda != 0.0) {
            for (std::size_t k = 0; k < gw.size(); ++k) {
                const double w = layer.weights[k];
                if (w > 0.0) gw[k] += l1_lambda;
                else if (w < 0.0) gw[k] -= l1_lambda;
            }
        }
        if (l == 0) break;

        Matrix prev(n, layer.in, 0.0);
        for (std::size_t b = 0; b < n; ++b) {
            const double* dz = delta.data.data() + b * layer.out;
            double* dx = prev.data.data() + b * layer.in;
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = dz[o];
                if (d == 0.0) continue;
                const double* wr = layer.weights.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) dx[i] += d * wr[i];
            }
            // ReLU derivative: activations[l] holds relu output of layer l - 1.
            const double* a = input.data.data() + b * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i)
                if (!(a[i] > 0.0)) dx[i] = 0.0;
        }
        delta = std::move(prev);
    }
    return result;
}

double loss_value(const MlpModel& model, const LabeledBatch& batch, double l1_lambda) {
    check_batch(model, batch);
    const Matrix logits = forward(model, batch.inputs);
    double data_loss = 0.0;
    for (std::size_t b = 0; b < logits.rows; ++b) data_loss += cross_entropy_row(logits.row(b), batch.labels[b]);
    return data_loss / static_cast<double>(logits.rows) + l1_lambda * l1_sum(model);
}

std::size_t argmax(std::span<const double> values) noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

}  // namespace maivar::nn
