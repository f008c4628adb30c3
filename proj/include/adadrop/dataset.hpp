#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adadrop/rng.hpp"

namespace adadrop {

// A supervised dataset: row-major feature matrix plus integer labels.
struct Dataset {
    std::vector<double> features;  // n x dim, row-major
    std::vector<std::int32_t> labels;
    std::int64_t n = 0;
    std::int64_t dim = 0;
    std::int64_t n_classes = 0;

    const double* row(std::int64_t i) const { return features.data() + i * dim; }
    void validate() const;
};

enum class SyntheticKind { blobs, spirals };

const char* to_string(SyntheticKind k);
SyntheticKind synthetic_kind_from_string(const std::string& name);

// blobs: isotropic Gaussians at well-separated class centers (any dim).
// spirals: two interleaved spirals, dim = 2, two classes.
// Class counts are balanced within one sample either way.
Dataset make_synthetic(SyntheticKind kind, std::int64_t n, std::int64_t dim,
                       std::int64_t n_classes, double noise, Xoshiro256PP& rng);

// IDX (big-endian) image/label pair, pixels scaled into [0,1].
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// CSV with a header row: a `label` column plus numeric columns f0..f{d-1}.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace adadrop
