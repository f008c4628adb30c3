#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adadrop/accounting.hpp"
#include "adadrop/controllers.hpp"
#include "adadrop/dataset.hpp"
#include "adadrop/model.hpp"
#include "adadrop/train.hpp"

namespace adadrop {

enum class DatasetSource { blobs, spirals, idx, csv };

struct DatasetSpec {
    DatasetSource source = DatasetSource::blobs;
    std::int64_t n = 200;
    std::int64_t dim = 2;
    std::int64_t n_classes = 2;
    double noise = 0.1;
    std::string images_path;  // idx
    std::string labels_path;  // idx
    std::string csv_path;     // csv

    bool operator==(const DatasetSpec&) const = default;
};

struct ModelSpec {
    ModelKind kind = ModelKind::softmax_regression;
    std::int64_t hidden_dim = 16;
    Activation activation = Activation::relu;
};

struct OptimizerSpec {
    double learning_rate = 0.1;
    double momentum = 0.9;
    double weight_decay = 0.0;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    ModelSpec model;
    OptimizerSpec optimizer;
    ControllerConfig controller;
    std::int64_t batch_size = 32;
    std::uint64_t master_seed = 0;
    std::string output_dir;  // empty: keep everything in memory

    void validate() const;
};

// Flat `key = value` config text with dotted section keys. Unknown or
// duplicate keys are hard errors so misspelled hyperparameters cannot
// silently fall back to defaults.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

struct RunSummary {
    double final_accuracy_full = 0.0;
    double best_accuracy_full = 0.0;
    double effective_epochs = 0.0;
    std::int64_t forward_epochs = 0;
    std::int64_t n_reheats = 0;
    std::int64_t n_rejections = 0;
    double wall_seconds = 0.0;
};

std::string summary_json(const RunSummary& summary);

struct RunResult {
    RunSummary summary;
    std::vector<TraceRecord> trace;
};

Dataset build_dataset(const ExperimentConfig& config);
Model build_model(const ExperimentConfig& config, const Dataset& dataset);

// Runs the full feedback loop: evaluate A_0, then per epoch let the
// controller decide the fraction, sample the subset, train on it, measure
// the full-dataset accuracy, and feed the change back. Writes trace.csv and
// summary.json under output_dir when set; rows are flushed as they are
// produced so a diverging run leaves a usable partial trace.
RunResult run_experiment(const ExperimentConfig& config);

// Full-data baseline trained to a target effective-epoch budget:
// floor(target_ee) full epochs plus one partial epoch covering the
// remainder, so the realized EE matches within 1/N. Artifacts are written as
// matched_trace.csv / matched_summary.json.
RunResult matched_baseline(const ExperimentConfig& config, double target_ee);

struct CompareRow {
    std::string method;
    std::int64_t n_seeds = 0;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double effective_epochs_mean = 0.0;
    double effective_epochs_std = 0.0;
    bool pareto = false;  // not dominated by any other row
};

// Runs every config over the seed list (empty: each config's own seed) and
// aggregates (method, accuracy, effective epochs) rows sorted by EE.
// All configs must share one dataset spec.
std::vector<CompareRow> compare(const std::vector<std::pair<std::string, ExperimentConfig>>& runs,
                                const std::vector<std::uint64_t>& seeds);

std::string pareto_csv(const std::vector<CompareRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace adadrop
