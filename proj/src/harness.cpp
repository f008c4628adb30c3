#include "adadrop/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adadrop/errors.hpp"

namespace adadrop {

void ExperimentConfig::validate() const {
    controller.validate();
    if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (!(optimizer.learning_rate >= 0.0))
        throw ConfigError("optimizer.learning_rate must be >= 0");
    if (!(optimizer.momentum >= 0.0 && optimizer.momentum < 1.0))
        throw ConfigError("optimizer.momentum must be in [0,1)");
    if (!(optimizer.weight_decay >= 0.0))
        throw ConfigError("optimizer.weight_decay must be >= 0");
    if (model.kind == ModelKind::mlp1 && model.hidden_dim < 1)
        throw ConfigError("model.hidden_dim must be >= 1 for mlp1");
    switch (dataset.source) {
        case DatasetSource::blobs:
        case DatasetSource::spirals:
            if (dataset.n < 1) throw ConfigError("dataset.n must be >= 1");
            break;
        case DatasetSource::idx:
            if (dataset.images_path.empty() || dataset.labels_path.empty())
                throw ConfigError("dataset.images and dataset.labels are required for idx");
            break;
        case DatasetSource::csv:
            if (dataset.csv_path.empty()) throw ConfigError("dataset.path is required for csv");
            break;
    }
}

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t");
    return text.substr(begin, end - begin + 1);
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t parsed = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse integer '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t parsed = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse unsigned integer '" + value + "'");
    }
}

double parse_f64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double parsed = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse number '" + value + "'");
    }
}

DatasetSource dataset_source_from_string(const std::string& name) {
    if (name == "blobs") return DatasetSource::blobs;
    if (name == "spirals") return DatasetSource::spirals;
    if (name == "idx") return DatasetSource::idx;
    if (name == "csv") return DatasetSource::csv;
    throw ConfigError("dataset.kind: unknown kind '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig config;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> keys = {
        {"seed", [&](const std::string& k, const std::string& v) { config.master_seed = parse_u64(k, v); }},
        {"output_dir", [&](const std::string&, const std::string& v) { config.output_dir = v; }},
        {"dataset.kind", [&](const std::string&, const std::string& v) { config.dataset.source = dataset_source_from_string(v); }},
        {"dataset.n", [&](const std::string& k, const std::string& v) { config.dataset.n = parse_i64(k, v); }},
        {"dataset.dim", [&](const std::string& k, const std::string& v) { config.dataset.dim = parse_i64(k, v); }},
        {"dataset.classes", [&](const std::string& k, const std::string& v) { config.dataset.n_classes = parse_i64(k, v); }},
        {"dataset.noise", [&](const std::string& k, const std::string& v) { config.dataset.noise = parse_f64(k, v); }},
        {"dataset.images", [&](const std::string&, const std::string& v) { config.dataset.images_path = v; }},
        {"dataset.labels", [&](const std::string&, const std::string& v) { config.dataset.labels_path = v; }},
        {"dataset.path", [&](const std::string&, const std::string& v) { config.dataset.csv_path = v; }},
        {"model.kind", [&](const std::string&, const std::string& v) { config.model.kind = model_kind_from_string(v); }},
        {"model.hidden_dim", [&](const std::string& k, const std::string& v) { config.model.hidden_dim = parse_i64(k, v); }},
        {"model.activation", [&](const std::string&, const std::string& v) { config.model.activation = activation_from_string(v); }},
        {"optimizer.learning_rate", [&](const std::string& k, const std::string& v) { config.optimizer.learning_rate = parse_f64(k, v); }},
        {"optimizer.momentum", [&](const std::string& k, const std::string& v) { config.optimizer.momentum = parse_f64(k, v); }},
        {"optimizer.weight_decay", [&](const std::string& k, const std::string& v) { config.optimizer.weight_decay = parse_f64(k, v); }},
        {"train.total_epochs", [&](const std::string& k, const std::string& v) { config.controller.total_epochs = parse_i64(k, v); }},
        {"train.batch_size", [&](const std::string& k, const std::string& v) { config.batch_size = parse_i64(k, v); }},
        {"controller.variant", [&](const std::string&, const std::string& v) { config.controller.variant = variant_from_string(v); }},
        {"controller.family", [&](const std::string&, const std::string& v) { config.controller.family = decay_kind_from_string(v); }},
        {"controller.alpha_init", [&](const std::string& k, const std::string& v) { config.controller.alpha_init = parse_f64(k, v); }},
        {"controller.alpha_min", [&](const std::string& k, const std::string& v) { config.controller.alpha_min = parse_f64(k, v); }},
        {"controller.alpha_max", [&](const std::string& k, const std::string& v) { config.controller.alpha_max = parse_f64(k, v); }},
        {"controller.eta_up", [&](const std::string& k, const std::string& v) { config.controller.eta_up = parse_f64(k, v); }},
        {"controller.eta_down", [&](const std::string& k, const std::string& v) { config.controller.eta_down = parse_f64(k, v); }},
        {"controller.delta_threshold", [&](const std::string& k, const std::string& v) { config.controller.delta_threshold = parse_f64(k, v); }},
        {"controller.gamma", [&](const std::string& k, const std::string& v) { config.controller.gamma = parse_f64(k, v); }},
        {"controller.tau", [&](const std::string& k, const std::string& v) { config.controller.tau = parse_f64(k, v); }},
        {"controller.p0", [&](const std::string& k, const std::string& v) { config.controller.p0 = parse_f64(k, v); }},
        {"controller.f_floor", [&](const std::string& k, const std::string& v) { config.controller.f_floor = parse_f64(k, v); }},
        {"controller.pdd_ratio", [&](const std::string& k, const std::string& v) { config.controller.pdd_ratio = parse_f64(k, v); }},
    };

    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown config key '" +
                              key + "'");
        if (!seen.insert(key).second)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate config key '" +
                              key + "'");
        it->second(key, value);
    }

    for (const char* required : {"dataset.kind", "controller.variant", "train.total_epochs"})
        if (!seen.count(required))
            throw ConfigError(origin + ": missing required key '" + std::string(required) + "'");

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string summary_json(const RunSummary& summary) {
    nlohmann::json j;
    j["final_accuracy_full"] = summary.final_accuracy_full;
    j["best_accuracy_full"] = summary.best_accuracy_full;
    j["effective_epochs"] = summary.effective_epochs;
    j["forward_epochs"] = summary.forward_epochs;
    j["n_reheats"] = summary.n_reheats;
    j["n_rejections"] = summary.n_rejections;
    j["wall_seconds"] = summary.wall_seconds;
    return j.dump(2) + "\n";
}

Dataset build_dataset(const ExperimentConfig& config) {
    switch (config.dataset.source) {
        case DatasetSource::blobs:
        case DatasetSource::spirals: {
            Xoshiro256PP rng = derive_stream(config.master_seed, StreamId::data, 0);
            const SyntheticKind kind = config.dataset.source == DatasetSource::blobs
                                           ? SyntheticKind::blobs
                                           : SyntheticKind::spirals;
            return make_synthetic(kind, config.dataset.n, config.dataset.dim,
                                  config.dataset.n_classes, config.dataset.noise, rng);
        }
        case DatasetSource::idx:
            return load_idx(config.dataset.images_path, config.dataset.labels_path);
        case DatasetSource::csv:
            return load_csv(config.dataset.csv_path);
    }
    throw ConfigError("dataset.kind: unhandled kind");
}

Model build_model(const ExperimentConfig& config, const Dataset& dataset) {
    Xoshiro256PP rng = derive_stream(config.master_seed, StreamId::init, 0);
    return init_model(config.model.kind, dataset.dim, dataset.n_classes, config.model.hidden_dim,
                      config.model.activation, rng);
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

namespace {

// Streams trace rows to disk as they happen; a diverging run keeps the rows
// written so far.
class TraceWriter {
public:
    TraceWriter(const std::string& output_dir, const std::string& filename) {
        if (output_dir.empty()) return;
        std::filesystem::create_directories(output_dir);
        path_ = (std::filesystem::path(output_dir) / filename).string();
        out_.open(path_, std::ios::binary);
        if (!out_) throw ConfigError("cannot write " + path_);
        out_ << trace_csv_header() << '\n';
        out_.flush();
    }

    void write(const TraceRecord& record) {
        if (!out_.is_open()) return;
        out_ << trace_csv_row(record) << '\n';
        out_.flush();
    }

private:
    std::string path_;
    std::ofstream out_;
};

using PlanFn =
    std::function<EpochDecision(std::int64_t t, const std::optional<Feedback>&, std::int64_t n_total)>;

// Shared epoch loop: `plan` yields each epoch's decision (controller-driven
// or fixed), the rest is identical between run_experiment and
// matched_baseline.
RunResult execute_run(const ExperimentConfig& config, std::int64_t total_epochs,
                      const PlanFn& plan, const std::string& trace_name,
                      const std::string& summary_name, bool alpha_column,
                      const std::function<double()>& current_alpha) {
    const auto start_time = std::chrono::steady_clock::now();

    Dataset dataset = build_dataset(config);
    Model model = build_model(config, dataset);
    Optimizer optimizer;
    optimizer.learning_rate = config.optimizer.learning_rate;
    optimizer.momentum = config.optimizer.momentum;
    optimizer.weight_decay = config.optimizer.weight_decay;

    TraceWriter writer(config.output_dir, trace_name);
    EpochLedger ledger(dataset.n);
    RunResult run;

    // A_0: full forward pass before any training, so delta is defined at
    // epoch 1.
    EvalResult eval = forward_full(model, dataset);
    std::int64_t forward_epochs = 1;
    double acc_prev = eval.accuracy;
    double best = 0.0;
    std::int64_t n_reheats = 0;
    std::int64_t n_rejections = 0;
    std::optional<Feedback> feedback;

    for (std::int64_t t = 1; t <= total_epochs; ++t) {
        const EpochDecision decision = plan(t, feedback, dataset.n);

        Xoshiro256PP sample_rng = derive_stream(config.master_seed, StreamId::sampling, t);
        const SubsetIndex subset = sample_subset(dataset.n, decision.subset_size, sample_rng);
        train_epoch(model, dataset, subset, optimizer, config.batch_size, sample_rng);

        const EvalResult full = forward_full(model, dataset);
        ++forward_epochs;
        const EvalResult on_subset = evaluate_subset(model, dataset, subset.indices);
        feedback = compute_feedback(full.accuracy, acc_prev, t);

        EpochMetrics metrics;
        metrics.accuracy_full = full.accuracy;
        metrics.accuracy_subset = on_subset.accuracy;
        metrics.loss_full = full.mean_loss;
        metrics.delta = feedback->delta;
        if (alpha_column) metrics.alpha = current_alpha();

        const TraceRecord row = record_epoch(ledger, t, decision, metrics);
        writer.write(row);
        run.trace.push_back(row);

        best = std::max(best, full.accuracy);
        if (decision.reheated) ++n_reheats;
        if (!decision.accepted) ++n_rejections;
        acc_prev = full.accuracy;
    }

    run.summary.final_accuracy_full = acc_prev;
    run.summary.best_accuracy_full = best;
    run.summary.effective_epochs = effective_epochs(ledger);
    run.summary.forward_epochs = forward_epochs;
    run.summary.n_reheats = n_reheats;
    run.summary.n_rejections = n_rejections;
    run.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();

    if (!config.output_dir.empty())
        write_text_file((std::filesystem::path(config.output_dir) / summary_name).string(),
                        summary_json(run.summary));
    return run;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Controller controller(config.controller);
    ScheduleState state = controller.initial_state();

    const auto plan = [&controller, &state, &config](std::int64_t t,
                                                     const std::optional<Feedback>& feedback,
                                                     std::int64_t n_total) {
        Xoshiro256PP accept_rng = derive_stream(config.master_seed, StreamId::acceptance, t);
        auto [next_state, decision] = controller.begin_epoch(state, feedback, n_total, accept_rng);
        state = next_state;
        return decision;
    };

    const bool alpha_column = config.controller.variant == Variant::adaptive_alpha;
    return execute_run(config, config.controller.total_epochs, plan, "trace.csv", "summary.json",
                       alpha_column, [&state]() { return state.alpha; });
}

RunResult matched_baseline(const ExperimentConfig& config, double target_ee) {
    config.validate();
    if (!(target_ee > 0.0))
        throw ConfigError("matched-baseline: target_ee must be > 0, got " +
                          std::to_string(target_ee));

    const auto full_epochs = static_cast<std::int64_t>(std::floor(target_ee));
    const double remainder = target_ee - static_cast<double>(full_epochs);

    const auto plan = [full_epochs, remainder](std::int64_t t, const std::optional<Feedback>&,
                                               std::int64_t n_total) {
        EpochDecision decision;
        if (t <= full_epochs) {
            decision.keep_fraction = 1.0;
            decision.subset_size = n_total;
        } else {
            decision.keep_fraction = remainder;
            decision.subset_size = subset_size_for(remainder, n_total);
        }
        return decision;
    };

    const std::int64_t total_epochs = full_epochs + (remainder > 0.0 ? 1 : 0);
    return execute_run(config, total_epochs, plan, "matched_trace.csv", "matched_summary.json",
                       /*alpha_column=*/false, []() { return 0.0; });
}

namespace {

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

}  // namespace

std::vector<CompareRow> compare(const std::vector<std::pair<std::string, ExperimentConfig>>& runs,
                                const std::vector<std::uint64_t>& seeds) {
    if (runs.empty()) throw ConfigError("compare: needs at least one config");
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (!(runs[i].second.dataset == runs[0].second.dataset))
            throw ConfigError("compare: '" + runs[i].first + "' uses a different dataset spec than '" +
                              runs[0].first + "'");

    std::vector<CompareRow> rows;
    rows.reserve(runs.size());
    for (const auto& [name, base_config] : runs) {
        std::vector<std::uint64_t> run_seeds = seeds;
        if (run_seeds.empty()) run_seeds.push_back(base_config.master_seed);

        std::vector<double> accuracies;
        std::vector<double> ees;
        for (std::uint64_t seed : run_seeds) {
            ExperimentConfig config = base_config;
            config.master_seed = seed;
            config.output_dir.clear();
            const RunResult run = run_experiment(config);
            accuracies.push_back(run.summary.final_accuracy_full);
            ees.push_back(run.summary.effective_epochs);
        }

        CompareRow row;
        row.method = name;
        row.n_seeds = static_cast<std::int64_t>(run_seeds.size());
        row.accuracy_mean = mean_of(accuracies);
        row.accuracy_std = sample_std(accuracies, row.accuracy_mean);
        row.effective_epochs_mean = mean_of(ees);
        row.effective_epochs_std = sample_std(ees, row.effective_epochs_mean);
        rows.push_back(row);
    }

    // A row is flagged when no other row strictly dominates it (higher
    // accuracy at lower effective epochs).
    for (auto& row : rows) {
        row.pareto = true;
        for (const auto& other : rows) {
            if (&other == &row) continue;
            if (other.accuracy_mean > row.accuracy_mean &&
                other.effective_epochs_mean < row.effective_epochs_mean) {
                row.pareto = false;
                break;
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
        if (a.effective_epochs_mean != b.effective_epochs_mean)
            return a.effective_epochs_mean < b.effective_epochs_mean;
        return a.method < b.method;
    });
    return rows;
}

namespace {

std::string real17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace

std::string pareto_csv(const std::vector<CompareRow>& rows) {
    std::string csv =
        "method,n_seeds,accuracy_mean,accuracy_std,effective_epochs_mean,"
        "effective_epochs_std,pareto\n";
    for (const auto& row : rows) {
        csv += row.method;
        csv += ',';
        csv += std::to_string(row.n_seeds);
        csv += ',';
        csv += real17(row.accuracy_mean);
        csv += ',';
        csv += real17(row.accuracy_std);
        csv += ',';
        csv += real17(row.effective_epochs_mean);
        csv += ',';
        csv += real17(row.effective_epochs_std);
        csv += ',';
        csv += row.pareto ? '1' : '0';
        csv += '\n';
    }
    return csv;
}

}  // namespace adadrop
