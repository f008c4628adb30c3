#pragma once

#include <cstdint>

#include "adadrop/model.hpp"
#include "adadrop/sampling.hpp"

namespace adadrop {

// Plain SGD with optional momentum and weight decay. Velocity is allocated
// on first use and must keep the parameter shape afterwards.
struct Optimizer {
    double learning_rate = 0.1;
    double momentum = 0.0;
    double weight_decay = 0.0;
    std::vector<double> velocity;
};

// One training epoch restricted to the subset: the subset indices are
// shuffled once from the given stream, partitioned into fixed batches, and
// each batch applies one mean-gradient step. Samples outside the subset
// contribute nothing. Non-finite gradients raise DivergenceError.
void train_epoch(Model& model, const Dataset& dataset, const SubsetIndex& subset,
                 Optimizer& optimizer, std::int64_t batch_size, Xoshiro256PP& rng);

}  // namespace adadrop
