#include "adadrop/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "adadrop/errors.hpp"

namespace adadrop {

void train_epoch(Model& model, const Dataset& dataset, const SubsetIndex& subset,
                 Optimizer& optimizer, std::int64_t batch_size, Xoshiro256PP& rng) {
    if (subset.n_total != dataset.n)
        throw std::invalid_argument("train_epoch: subset was drawn from a dataset of size " +
                                    std::to_string(subset.n_total) + ", not " +
                                    std::to_string(dataset.n));
    if (subset.indices.empty()) throw std::invalid_argument("train_epoch: empty subset");
    if (batch_size < 1) throw std::invalid_argument("train_epoch: batch_size must be >= 1");

    const std::size_t param_count = model.parameters.size();
    if (optimizer.velocity.empty()) optimizer.velocity.assign(param_count, 0.0);
    if (optimizer.velocity.size() != param_count)
        throw std::invalid_argument("train_epoch: optimizer velocity shape mismatch");

    std::vector<std::int64_t> order = subset.indices;
    shuffle(order, rng);

    const std::int64_t total = static_cast<std::int64_t>(order.size());
    std::vector<std::int64_t> batch;
    for (std::int64_t start = 0; start < total; start += batch_size) {
        const std::int64_t stop = std::min(total, start + batch_size);
        batch.assign(order.begin() + start, order.begin() + stop);
        std::vector<double> grad = mean_gradient(model, dataset, batch);

        for (std::size_t i = 0; i < param_count; ++i) {
            double g = grad[i];
            if (!std::isfinite(g))
                throw DivergenceError("non-finite gradient during training (diverged)");
            if (optimizer.weight_decay != 0.0)
                g += optimizer.weight_decay * model.parameters[i];
            double step = g;
            if (optimizer.momentum != 0.0) {
                optimizer.velocity[i] = optimizer.momentum * optimizer.velocity[i] + g;
                step = optimizer.velocity[i];
            }
            model.parameters[i] -= optimizer.learning_rate * step;
        }
    }
}

}  // namespace adadrop
