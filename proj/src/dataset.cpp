#include "adadrop/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adadrop/errors.hpp"

namespace adadrop {

void Dataset::validate() const {
    if (n < 1) throw ConfigError("dataset: needs at least one sample");
    if (dim < 1) throw ConfigError("dataset: feature dimension must be >= 1");
    if (n_classes < 2) throw ConfigError("dataset: needs at least two classes");
    if (static_cast<std::int64_t>(features.size()) != n * dim)
        throw ConfigError("dataset: feature matrix shape mismatch");
    if (static_cast<std::int64_t>(labels.size()) != n)
        throw ConfigError("dataset: label count mismatch");
    for (double v : features)
        if (!std::isfinite(v)) throw ConfigError("dataset: non-finite feature value");
    for (std::int32_t y : labels)
        if (y < 0 || y >= n_classes) throw ConfigError("dataset: label outside [0, n_classes)");
}

const char* to_string(SyntheticKind k) {
    return k == SyntheticKind::blobs ? "blobs" : "spirals";
}

SyntheticKind synthetic_kind_from_string(const std::string& name) {
    if (name == "blobs") return SyntheticKind::blobs;
    if (name == "spirals") return SyntheticKind::spirals;
    throw ConfigError("unknown synthetic dataset kind: " + name);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

Dataset make_blobs(std::int64_t n, std::int64_t dim, std::int64_t n_classes, double noise,
                   Xoshiro256PP& rng) {
    Dataset ds;
    ds.n = n;
    ds.dim = dim;
    ds.n_classes = n_classes;
    ds.features.resize(static_cast<std::size_t>(n * dim));
    ds.labels.resize(static_cast<std::size_t>(n));

    // Class centers: spread on a circle of radius 4 in the first two
    // dimensions (on a line when dim == 1), so classes are separated by
    // construction.
    std::vector<double> centers(static_cast<std::size_t>(n_classes * dim), 0.0);
    for (std::int64_t c = 0; c < n_classes; ++c) {
        double* center = centers.data() + c * dim;
        if (dim == 1) {
            center[0] = 4.0 * static_cast<double>(c);
        } else {
            const double angle = 2.0 * kPi * static_cast<double>(c) / static_cast<double>(n_classes);
            center[0] = 4.0 * std::cos(angle);
            center[1] = 4.0 * std::sin(angle);
        }
    }

    for (std::int64_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::int32_t>(i % n_classes);
        ds.labels[static_cast<std::size_t>(i)] = c;
        const double* center = centers.data() + static_cast<std::int64_t>(c) * dim;
        double* x = ds.features.data() + i * dim;
        for (std::int64_t j = 0; j < dim; ++j) x[j] = center[j] + noise * normal01(rng);
    }
    return ds;
}

Dataset make_spirals(std::int64_t n, double noise, Xoshiro256PP& rng) {
    Dataset ds;
    ds.n = n;
    ds.dim = 2;
    ds.n_classes = 2;
    ds.features.resize(static_cast<std::size_t>(n * 2));
    ds.labels.resize(static_cast<std::size_t>(n));

    // Arms grow from radius 0.3 to 3 over one full turn, offset by pi; the
    // radial gap between arms stays wide enough to learn at desk scale.
    for (std::int64_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::int32_t>(i % 2);
        const std::int64_t j = i / 2;
        const std::int64_t per_class = (n + 1 - c) / 2;
        const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(per_class);
        const double radius = 0.3 + 2.7 * t;
        const double angle = 2.0 * kPi * t + kPi * static_cast<double>(c);
        ds.labels[static_cast<std::size_t>(i)] = c;
        double* x = ds.features.data() + i * 2;
        x[0] = radius * std::cos(angle) + noise * normal01(rng);
        x[1] = radius * std::sin(angle) + noise * normal01(rng);
    }
    return ds;
}

}  // namespace

Dataset make_synthetic(SyntheticKind kind, std::int64_t n, std::int64_t dim,
                       std::int64_t n_classes, double noise, Xoshiro256PP& rng) {
    if (n < 1) throw ConfigError("make_synthetic: n must be >= 1");
    if (n_classes < 2) throw ConfigError("make_synthetic: n_classes must be >= 2");
    if (n < n_classes) throw ConfigError("make_synthetic: n must be >= n_classes");
    if (!(noise >= 0.0)) throw ConfigError("make_synthetic: noise must be >= 0");
    if (kind == SyntheticKind::spirals) {
        if (dim != 2) throw ConfigError("make_synthetic: spirals require dim = 2");
        if (n_classes != 2) throw ConfigError("make_synthetic: spirals require 2 classes");
        return make_spirals(n, noise, rng);
    }
    if (dim < 1) throw ConfigError("make_synthetic: dim must be >= 1");
    return make_blobs(n, dim, n_classes, noise, rng);
}

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path, std::int64_t& offset) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw ConfigError(path + ": truncated header at byte offset " + std::to_string(offset));
    offset += 4;
    return (static_cast<std::uint32_t>(bytes[0]) << 24) |
           (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

std::vector<unsigned char> read_payload(std::ifstream& in, const std::string& path,
                                        std::int64_t count, std::int64_t offset) {
    std::vector<unsigned char> payload(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(payload.data()), count);
    if (in.gcount() != count)
        throw ConfigError(path + ": truncated payload at byte offset " +
                          std::to_string(offset + in.gcount()) + " (expected " +
                          std::to_string(count) + " bytes)");
    return payload;
}

char hex_digit(std::uint32_t v) { return "0123456789abcdef"[v & 0xF]; }

std::string hex32(std::uint32_t v) {
    std::string s = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) s += hex_digit(v >> shift);
    return s;
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) throw ConfigError("cannot open " + images_path);
    std::int64_t offset = 0;
    const std::uint32_t images_magic = read_be32(images, images_path, offset);
    if (images_magic != kImagesMagic)
        throw ConfigError(images_path + ": unsupported magic " + hex32(images_magic) +
                          " at byte offset 0 (expected " + hex32(kImagesMagic) + ")");
    const std::int64_t n_images = read_be32(images, images_path, offset);
    const std::int64_t rows = read_be32(images, images_path, offset);
    const std::int64_t cols = read_be32(images, images_path, offset);
    if (n_images < 1 || rows < 1 || cols < 1)
        throw ConfigError(images_path + ": degenerate dimensions " + std::to_string(n_images) +
                          "x" + std::to_string(rows) + "x" + std::to_string(cols));
    const auto pixels = read_payload(images, images_path, n_images * rows * cols, offset);

    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) throw ConfigError("cannot open " + labels_path);
    offset = 0;
    const std::uint32_t labels_magic = read_be32(labels, labels_path, offset);
    if (labels_magic != kLabelsMagic)
        throw ConfigError(labels_path + ": unsupported magic " + hex32(labels_magic) +
                          " at byte offset 0 (expected " + hex32(kLabelsMagic) + ")");
    const std::int64_t n_labels = read_be32(labels, labels_path, offset);
    if (n_labels != n_images)
        throw ConfigError("image/label count mismatch: " + std::to_string(n_images) +
                          " images in " + images_path + " vs " + std::to_string(n_labels) +
                          " labels in " + labels_path + " (label count at byte offset 4)");
    const auto raw_labels = read_payload(labels, labels_path, n_labels, offset);

    Dataset ds;
    ds.n = n_images;
    ds.dim = rows * cols;
    ds.features.resize(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        ds.features[i] = static_cast<double>(pixels[i]) / 255.0;
    ds.labels.resize(raw_labels.size());
    std::int32_t max_label = 0;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        ds.labels[i] = static_cast<std::int32_t>(raw_labels[i]);
        max_label = std::max(max_label, ds.labels[i]);
    }
    ds.n_classes = max_label + 1 < 2 ? 2 : max_label + 1;
    ds.validate();
    return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);

    // Header must be exactly {label, f0..f{d-1}}, in any column order.
    std::int64_t label_col = -1;
    std::vector<std::int64_t> feature_col(header.size(), -1);
    std::int64_t dim = 0;
    for (std::size_t col = 0; col < header.size(); ++col) {
        const std::string& name = header[col];
        if (name == "label") {
            if (label_col >= 0) throw ConfigError(path + ": duplicate label column");
            label_col = static_cast<std::int64_t>(col);
        } else if (name.size() > 1 && name[0] == 'f') {
            std::size_t pos = 0;
            const int index = std::stoi(name.substr(1), &pos);
            if (pos + 1 != name.size() || index < 0)
                throw ConfigError(path + ": unexpected column '" + name + "'");
            feature_col[col] = index;
            dim = std::max<std::int64_t>(dim, index + 1);
        } else {
            throw ConfigError(path + ": unexpected column '" + name + "'");
        }
    }
    if (label_col < 0) throw ConfigError(path + ": missing label column");
    if (dim < 1) throw ConfigError(path + ": no feature columns f0..f{d-1}");
    if (static_cast<std::size_t>(dim) + 1 != header.size())
        throw ConfigError(path + ": feature columns must be exactly f0..f" + std::to_string(dim - 1));

    Dataset ds;
    ds.dim = dim;
    std::int32_t max_label = 0;
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<double> features(static_cast<std::size_t>(dim), 0.0);
        std::int32_t label = 0;
        for (std::size_t col = 0; col < fields.size(); ++col) {
            try {
                if (static_cast<std::int64_t>(col) == label_col) {
                    label = static_cast<std::int32_t>(std::stol(fields[col]));
                } else {
                    features[static_cast<std::size_t>(feature_col[col])] = std::stod(fields[col]);
                }
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": cannot parse '" +
                                  fields[col] + "'");
            }
        }
        if (label < 0)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": negative label");
        ds.features.insert(ds.features.end(), features.begin(), features.end());
        ds.labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    ds.n = static_cast<std::int64_t>(ds.labels.size());
    ds.n_classes = max_label + 1 < 2 ? 2 : max_label + 1;
    ds.validate();
    return ds;
}

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "label";
    for (std::int64_t j = 0; j < dataset.dim; ++j) out << ",f" << j;
    out << '\n';
    char buffer[40];
    for (std::int64_t i = 0; i < dataset.n; ++i) {
        out << dataset.labels[static_cast<std::size_t>(i)];
        const double* x = dataset.row(i);
        for (std::int64_t j = 0; j < dataset.dim; ++j) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", x[j]);
            out << ',' << buffer;
        }
        out << '\n';
    }
}

}  // namespace adadrop
