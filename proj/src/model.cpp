#include "adadrop/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adadrop/errors.hpp"
#include "adadrop/sampling.hpp"
#include "adadrop/types.hpp"

namespace adadrop {

const char* to_string(ModelKind k) {
    return k == ModelKind::softmax_regression ? "softmax_regression" : "mlp1";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "softmax_regression") return ModelKind::softmax_regression;
    if (name == "mlp1") return ModelKind::mlp1;
    throw ConfigError("unknown model kind: " + name);
}

const char* to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    throw ConfigError("unknown activation: " + name);
}

std::int64_t Model::parameter_count() const {
    if (kind == ModelKind::softmax_regression) return n_classes * input_dim + n_classes;
    return hidden_dim * input_dim + hidden_dim + n_classes * hidden_dim + n_classes;
}

void Model::validate() const {
    if (input_dim < 1 || n_classes < 2)
        throw ConfigError("model: input_dim must be >= 1 and n_classes >= 2");
    if (kind == ModelKind::mlp1 && hidden_dim < 1)
        throw ConfigError("model: mlp1 needs hidden_dim >= 1");
    if (static_cast<std::int64_t>(parameters.size()) != parameter_count())
        throw ConfigError("model: parameter vector size mismatch");
    for (double p : parameters)
        if (!std::isfinite(p)) throw ConfigError("model: non-finite parameter");
}

Model init_model(ModelKind kind, std::int64_t input_dim, std::int64_t n_classes,
                 std::int64_t hidden_dim, Activation activation, Xoshiro256PP& rng) {
    Model model;
    model.kind = kind;
    model.input_dim = input_dim;
    model.n_classes = n_classes;
    model.hidden_dim = kind == ModelKind::mlp1 ? hidden_dim : 0;
    model.activation = activation;
    model.parameters.assign(static_cast<std::size_t>(model.parameter_count()), 0.0);
    if (kind == ModelKind::mlp1) {
        const double scale =
            std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
        const std::int64_t hidden_weights = hidden_dim * input_dim;
        for (std::int64_t i = 0; i < hidden_weights; ++i)
            model.parameters[static_cast<std::size_t>(i)] =
                scale * (2.0 * uniform01(rng) - 1.0);
    }
    model.validate();
    return model;
}

namespace {

// Scratch holding one sample's forward intermediates.
struct Workspace {
    std::vector<double> hidden_pre;
    std::vector<double> hidden;
    std::vector<double> logits;
    std::vector<double> probs;
    std::vector<double> dlogits;
    std::vector<double> dhidden;
};

void compute_logits(const Model& model, const double* x, Workspace& ws) {
    const std::int64_t d = model.input_dim;
    const std::int64_t c = model.n_classes;
    const double* p = model.parameters.data();
    ws.logits.assign(static_cast<std::size_t>(c), 0.0);

    if (model.kind == ModelKind::softmax_regression) {
        const double* weights = p;
        const double* bias = p + c * d;
        for (std::int64_t k = 0; k < c; ++k) {
            double z = bias[k];
            const double* row = weights + k * d;
            for (std::int64_t j = 0; j < d; ++j) z += row[j] * x[j];
            ws.logits[static_cast<std::size_t>(k)] = z;
        }
        return;
    }

    const std::int64_t h = model.hidden_dim;
    const double* w1 = p;
    const double* b1 = p + h * d;
    const double* w2 = b1 + h;
    const double* b2 = w2 + c * h;
    ws.hidden_pre.assign(static_cast<std::size_t>(h), 0.0);
    ws.hidden.assign(static_cast<std::size_t>(h), 0.0);
    for (std::int64_t k = 0; k < h; ++k) {
        double z = b1[k];
        const double* row = w1 + k * d;
        for (std::int64_t j = 0; j < d; ++j) z += row[j] * x[j];
        ws.hidden_pre[static_cast<std::size_t>(k)] = z;
        ws.hidden[static_cast<std::size_t>(k)] =
            model.activation == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
    }
    for (std::int64_t k = 0; k < c; ++k) {
        double z = b2[k];
        const double* row = w2 + k * h;
        for (std::int64_t j = 0; j < h; ++j) z += row[j] * ws.hidden[static_cast<std::size_t>(j)];
        ws.logits[static_cast<std::size_t>(k)] = z;
    }
}

// Returns the sample's cross-entropy loss and fills ws.probs.
double softmax_loss(const std::vector<double>& logits, std::int32_t label,
                    std::vector<double>& probs) {
    const std::size_t c = logits.size();
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    probs.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        probs[k] = std::exp(logits[k] - max_logit);
        sum += probs[k];
    }
    for (std::size_t k = 0; k < c; ++k) probs[k] /= sum;
    const double lse = max_logit + std::log(sum);
    return lse - logits[static_cast<std::size_t>(label)];
}

std::int32_t argmax(const std::vector<double>& values) {
    return static_cast<std::int32_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
}

EvalResult evaluate(const Model& model, const Dataset& dataset,
                    const std::vector<std::int64_t>* indices) {
    const std::int64_t count = indices ? static_cast<std::int64_t>(indices->size()) : dataset.n;
    if (count < 1) throw std::invalid_argument("evaluate: empty sample set");
    Workspace ws;
    std::int64_t correct = 0;
    double loss_sum = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t idx = indices ? (*indices)[static_cast<std::size_t>(i)] : i;
        compute_logits(model, dataset.row(idx), ws);
        const std::int32_t label = dataset.labels[static_cast<std::size_t>(idx)];
        loss_sum += softmax_loss(ws.logits, label, ws.probs);
        if (argmax(ws.logits) == label) ++correct;
    }
    const double mean_loss = loss_sum / static_cast<double>(count);
    if (!std::isfinite(mean_loss))
        throw DivergenceError("non-finite loss in forward pass (training diverged)");
    return EvalResult{static_cast<double>(correct) / static_cast<double>(count), mean_loss};
}

void accumulate_gradient(const Model& model, const Dataset& dataset, std::int64_t index,
                         Workspace& ws, std::vector<double>& grad) {
    const std::int64_t d = model.input_dim;
    const std::int64_t c = model.n_classes;
    const double* x = dataset.row(index);
    const std::int32_t label = dataset.labels[static_cast<std::size_t>(index)];

    compute_logits(model, x, ws);
    softmax_loss(ws.logits, label, ws.probs);
    ws.dlogits = ws.probs;
    ws.dlogits[static_cast<std::size_t>(label)] -= 1.0;

    if (model.kind == ModelKind::softmax_regression) {
        double* dw = grad.data();
        double* db = grad.data() + c * d;
        for (std::int64_t k = 0; k < c; ++k) {
            const double g = ws.dlogits[static_cast<std::size_t>(k)];
            double* row = dw + k * d;
            for (std::int64_t j = 0; j < d; ++j) row[j] += g * x[j];
            db[k] += g;
        }
        return;
    }

    const std::int64_t h = model.hidden_dim;
    const double* p = model.parameters.data();
    const double* w2 = p + h * d + h;
    double* dw1 = grad.data();
    double* db1 = grad.data() + h * d;
    double* dw2 = db1 + h;
    double* db2 = dw2 + c * h;

    ws.dhidden.assign(static_cast<std::size_t>(h), 0.0);
    for (std::int64_t k = 0; k < c; ++k) {
        const double g = ws.dlogits[static_cast<std::size_t>(k)];
        const double* w2_row = w2 + k * h;
        double* dw2_row = dw2 + k * h;
        for (std::int64_t j = 0; j < h; ++j) {
            dw2_row[j] += g * ws.hidden[static_cast<std::size_t>(j)];
            ws.dhidden[static_cast<std::size_t>(j)] += g * w2_row[j];
        }
        db2[k] += g;
    }
    for (std::int64_t k = 0; k < h; ++k) {
        const double pre = ws.hidden_pre[static_cast<std::size_t>(k)];
        const double act_grad = model.activation == Activation::relu
                                    ? (pre > 0.0 ? 1.0 : 0.0)
                                    : 1.0 - std::tanh(pre) * std::tanh(pre);
        const double g = ws.dhidden[static_cast<std::size_t>(k)] * act_grad;
        double* row = dw1 + k * d;
        for (std::int64_t j = 0; j < d; ++j) row[j] += g * x[j];
        db1[k] += g;
    }
}

}  // namespace

EvalResult forward_full(const Model& model, const Dataset& dataset) {
    if (dataset.dim != model.input_dim || dataset.n_classes > model.n_classes)
        throw ConfigError("forward_full: dataset shape does not match model");
    return evaluate(model, dataset, nullptr);
}

EvalResult evaluate_subset(const Model& model, const Dataset& dataset,
                           const std::vector<std::int64_t>& indices) {
    return evaluate(model, dataset, &indices);
}

std::vector<double> mean_gradient(const Model& model, const Dataset& dataset,
                                  const std::vector<std::int64_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("mean_gradient: empty index set");
    std::vector<double> grad(static_cast<std::size_t>(model.parameter_count()), 0.0);
    Workspace ws;
    for (std::int64_t idx : indices) accumulate_gradient(model, dataset, idx, ws, grad);
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (double& g : grad) g *= inv;
    return grad;
}

std::vector<double> full_gradient(const Model& model, const Dataset& dataset) {
    std::vector<std::int64_t> all(static_cast<std::size_t>(dataset.n));
    for (std::int64_t i = 0; i < dataset.n; ++i) all[static_cast<std::size_t>(i)] = i;
    return mean_gradient(model, dataset, all);
}

double grad_check(const Model& model, const Dataset& dataset, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("grad_check: epsilon must be > 0");
    const std::vector<double> analytic = full_gradient(model, dataset);
    Model probe = model;
    double max_rel_error = 0.0;
    for (std::size_t i = 0; i < probe.parameters.size(); ++i) {
        const double saved = probe.parameters[i];
        probe.parameters[i] = saved + epsilon;
        const double loss_plus = evaluate(probe, dataset, nullptr).mean_loss;
        probe.parameters[i] = saved - epsilon;
        const double loss_minus = evaluate(probe, dataset, nullptr).mean_loss;
        probe.parameters[i] = saved;
        const double fd = (loss_plus - loss_minus) / (2.0 * epsilon);
        const double rel =
            std::abs(fd - analytic[i]) / (std::abs(fd) + std::abs(analytic[i]) + 1e-12);
        max_rel_error = std::max(max_rel_error, rel);
    }
    return max_rel_error;
}

double gradient_variance_probe(const Model& model, const Dataset& dataset, double fraction,
                               std::int64_t n_trials, Xoshiro256PP& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("gradient_variance_probe: fraction must be in (0,1]");
    if (n_trials < 2)
        throw std::invalid_argument("gradient_variance_probe: n_trials must be >= 2");

    const std::vector<double> reference = full_gradient(model, dataset);
    const std::int64_t k = subset_size_for(fraction, dataset.n);
    const auto param_count = static_cast<double>(reference.size());

    double total = 0.0;
    for (std::int64_t trial = 0; trial < n_trials; ++trial) {
        const SubsetIndex subset = sample_subset(dataset.n, k, rng);
        const std::vector<double> grad = mean_gradient(model, dataset, subset.indices);
        double sq = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const double dev = grad[i] - reference[i];
            sq += dev * dev;
        }
        total += sq / param_count;
    }
    return total / static_cast<double>(n_trials);
}

}  // namespace adadrop
