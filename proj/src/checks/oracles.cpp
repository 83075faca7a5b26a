#include "maivar/checks/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace maivar::checks {

std::vector<double> direct_dft_power(std::span<const double> frame) {
    const std::size_t n = frame.size();
    // Exact angles 2 pi m / n, indexed by (k * t) mod n.
    std::vector<double> cos_table(n), sin_table(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) /
                                  static_cast<long double>(n);
        cos_table[m] = static_cast<double>(std::cos(angle));
        sin_table[m] = static_cast<double>(std::sin(angle));
    }
    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        double re = 0.0, im = 0.0;
        std::size_t m = 0;
        for (std::size_t t = 0; t < n; ++t) {
            re += frame[t] * cos_table[m];
            im += frame[t] * sin_table[m];
            m += k;
            if (m >= n) m -= n;
        }
        power[k] = re * re + im * im;
    }
    return power;
}

std::vector<double> reflect_padded(std::span<const double> samples, std::size_t pad) {
    const auto len = static_cast<std::ptrdiff_t>(samples.size());
    std::vector<double> out(samples.size() + 2 * pad);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(pad);
        while (p < 0 || p >= len) {
            if (p < 0) p = -p;
            if (p >= len) p = 2 * (len - 1) - p;
        }
        out[i] = samples[static_cast<std::size_t>(p)];
    }
    return out;
}

std::vector<std::vector<double>> reference_stft_power(std::span<const double> samples, std::size_t window_len,
                                                      std::size_t hop_len) {
    const auto padded = reflect_padded(samples, window_len / 2);
    const std::size_t frames = (padded.size() - window_len) / hop_len + 1;
    std::vector<std::vector<double>> out;
    std::vector<double> frame(window_len);
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t i = 0; i < window_len; ++i) {
            const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                   static_cast<double>(window_len)));
            frame[i] = padded[f * hop_len + i] * w;
        }
        out.push_back(direct_dft_power(frame));
    }
    return out;
}

double max_relative_deviation(std::span<const double> actual, std::span<const double> expected) {
    double peak = 0.0, err = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        peak = std::max(peak, std::abs(expected[k]));
        err = std::max(err, std::abs(actual[k] - expected[k]));
    }
    if (peak == 0.0) return err;
    return err / peak;
}

nn::ParamBuffers finite_difference_gradients(const nn::MlpModel& model, const nn::LabeledBatch& batch,
                                             double l1_lambda, double h) {
    nn::MlpModel probe = model;
    nn::ParamBuffers out = nn::zeros_like(model);
    auto central = [&](double& param) {
        const double saved = param;
        param = saved + h;
        const double up = nn::loss_value(probe, batch, l1_lambda);
        param = saved - h;
        const double down = nn::loss_value(probe, batch, l1_lambda);
        param = saved;
        return (up - down) / (2.0 * h);
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        for (std::size_t k = 0; k < probe.layers[l].weights.size(); ++k)
            out.weights[l][k] = central(probe.layers[l].weights[k]);
        for (std::size_t k = 0; k < probe.layers[l].biases.size(); ++k)
            out.biases[l][k] = central(probe.layers[l].biases[k]);
    }
    return out;
}

GradientComparison compare_gradients(const nn::ParamBuffers& analytic, const nn::ParamBuffers& numeric,
                                     double abs_tol, double rel_tol) {
    GradientComparison cmp;
    auto check = [&](const std::vector<double>& a, const std::vector<double>& n) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double err = std::abs(a[k] - n[k]);
            const double scale = std::max(std::abs(a[k]), std::abs(n[k]));
            ++cmp.checked;
            cmp.max_abs_error = std::max(cmp.max_abs_error, err);
            if (scale > 0.0) cmp.max_rel_error = std::max(cmp.max_rel_error, err / scale);
            if (err > std::max(abs_tol, rel_tol * scale)) ++cmp.failures;
        }
    };
    for (std::size_t l = 0; l < analytic.weights.size(); ++l) {
        check(analytic.weights[l], numeric.weights[l]);
        check(analytic.biases[l], numeric.biases[l]);
    }
    return cmp;
}

}  // namespace maivar::checks
