#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adadrop/dataset.hpp"
#include "adadrop/rng.hpp"

namespace adadrop {

enum class ModelKind { softmax_regression, mlp1 };
enum class Activation { relu, tanh };

const char* to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& name);
const char* to_string(Activation a);
Activation activation_from_string(const std::string& name);

// Flat-parameter classifier. Layout is weights then biases per layer,
// weights row-major [out x in]:
//   softmax_regression: [W (C*d), b (C)]
//   mlp1:               [W1 (h*d), b1 (h), W2 (C*h), b2 (C)]
struct Model {
    ModelKind kind = ModelKind::softmax_regression;
    std::int64_t input_dim = 0;
    std::int64_t n_classes = 0;
    std::int64_t hidden_dim = 0;  // mlp1 only
    Activation activation = Activation::relu;
    std::vector<double> parameters;

    std::int64_t parameter_count() const;
    void validate() const;
};

// Hidden layer ~ uniform(-s, s) with s = sqrt(6 / (fan_in + fan_out)) drawn
// from the init stream; the final layer starts at zero so the initial loss
// is exactly ln(n_classes).
Model init_model(ModelKind kind, std::int64_t input_dim, std::int64_t n_classes,
                 std::int64_t hidden_dim, Activation activation, Xoshiro256PP& rng);

struct EvalResult {
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

// Full-dataset forward pass: argmax accuracy and mean cross-entropy with
// log-sum-exp stabilization. Non-finite loss raises DivergenceError.
EvalResult forward_full(const Model& model, const Dataset& dataset);

// Same pass restricted to an index subset (telemetry).
EvalResult evaluate_subset(const Model& model, const Dataset& dataset,
                           const std::vector<std::int64_t>& indices);

// Mean cross-entropy gradient over the given sample indices, accumulated in
// index order so results are deterministic.
std::vector<double> mean_gradient(const Model& model, const Dataset& dataset,
                                  const std::vector<std::int64_t>& indices);
std::vector<double> full_gradient(const Model& model, const Dataset& dataset);

// Central finite differences of the mean loss against the analytic
// gradient; returns the max over parameters of
// |g_fd - g| / (|g_fd| + |g| + 1e-12).
double grad_check(const Model& model, const Dataset& dataset, double epsilon);

// Mean squared deviation (averaged over parameters and trials) of subset
// mean gradients from the full-data gradient, for subsets of the given
// fraction. fraction = 1 gives exactly zero.
double gradient_variance_probe(const Model& model, const Dataset& dataset, double fraction,
                               std::int64_t n_trials, Xoshiro256PP& rng);

}  // namespace adadrop
