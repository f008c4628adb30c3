#include "adadrop/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adadrop {

SubsetIndex sample_subset(std::int64_t n_total, std::int64_t k, Xoshiro256PP& rng) {
    if (n_total < 1)
        throw std::invalid_argument("sample_subset: n_total must be >= 1, got " +
                                    std::to_string(n_total));
    if (k < 1 || k > n_total)
        throw std::invalid_argument("sample_subset: k must be in [1, n_total], got k=" +
                                    std::to_string(k) + " n_total=" + std::to_string(n_total));

    std::vector<std::int64_t> pool(static_cast<std::size_t>(n_total));
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < k; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(n_total - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return SubsetIndex{std::move(pool), n_total};
}

void shuffle(std::vector<std::int64_t>& values, Xoshiro256PP& rng) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]);
    }
}

}  // namespace adadrop
