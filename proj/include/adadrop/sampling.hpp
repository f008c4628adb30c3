#pragma once

#include <cstdint>
#include <vector>

#include "adadrop/rng.hpp"

namespace adadrop {

// A sampled index set D_t within the full dataset D_0, kept sorted so equal
// subsets compare equal.
struct SubsetIndex {
    std::vector<std::int64_t> indices;
    std::int64_t n_total = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(indices.size()); }
};

// Draws k distinct indices from [0, n_total) by partial Fisher-Yates,
// re-sampled independently every epoch from the epoch's sampling stream.
SubsetIndex sample_subset(std::int64_t n_total, std::int64_t k, Xoshiro256PP& rng);

// In-place Fisher-Yates shuffle, used for subset pass ordering.
void shuffle(std::vector<std::int64_t>& values, Xoshiro256PP& rng);

}  // namespace adadrop
