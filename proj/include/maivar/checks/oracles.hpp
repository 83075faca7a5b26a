#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maivar/neural/mlp.hpp"

// Reference computations that share no code path with the implementations
// they check. Used by the unit tests, the acceptance suite and `selftest`.
namespace maivar::checks {

// |X[k]|^2 for k = 0..N/2 by the O(N^2) definition of the DFT.
std::vector<double> direct_dft_power(std::span<const double> frame);

// Explicitly mirrored copy of `samples` with `pad` extra samples per side
// (edge sample not repeated). Needs at least two samples.
std::vector<double> reflect_padded(std::span<const double> samples, std::size_t pad);

// Centered, periodic-Hann STFT power computed frame by frame with
// direct_dft_power.
std::vector<std::vector<double>> reference_stft_power(std::span<const double> samples, std::size_t window_len,
                                                      std::size_t hop_len);

// max_k |actual - expected| / max_k |expected| (absolute when expected is 0).
double max_relative_deviation(std::span<const double> actual, std::span<const double> expected);

// Central finite differences of loss_value over every parameter, laid out
// like ParamBuffers.
nn::ParamBuffers finite_difference_gradients(const nn::MlpModel& model, const nn::LabeledBatch& batch,
                                             double l1_lambda, double h = 1e-5);

struct GradientComparison {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
};

// Passes an entry when |a - n| <= max(abs_tol, rel_tol * max(|a|, |n|)).
GradientComparison compare_gradients(const nn::ParamBuffers& analytic, const nn::ParamBuffers& numeric,
                                     double abs_tol = 1e-6, double rel_tol = 1e-4);

}  // namespace maivar::checks
