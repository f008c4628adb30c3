// Python bindings for the adaptive data-dropout core.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adadrop/accounting.hpp"
#include "adadrop/controllers.hpp"
#include "adadrop/dataset.hpp"
#include "adadrop/errors.hpp"
#include "adadrop/harness.hpp"
#include "adadrop/model.hpp"
#include "adadrop/train.hpp"

namespace py = pybind11;
using namespace adadrop;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Feedback-driven adaptive data-dropout scheduling";

#ifdef ADADROP_VERSION
    m.attr("__version__") = ADADROP_VERSION;
#else
    m.attr("__version__") = "dev";
#endif

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DivergenceError>(m, "DivergenceError");

    // --- rng / sampling ---------------------------------------------------
    py::enum_<StreamId>(m, "StreamId")
        .value("sampling", StreamId::sampling)
        .value("acceptance", StreamId::acceptance)
        .value("init", StreamId::init)
        .value("data", StreamId::data);

    py::class_<Xoshiro256PP>(m, "RngStream")
        .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
        .def("next_u64", [](Xoshiro256PP& rng) { return rng(); })
        .def("next_double", [](Xoshiro256PP& rng) { return uniform01(rng); });

    m.def("derive_stream", &derive_stream, py::arg("master_seed"), py::arg("stream_id"),
          py::arg("epoch"));

    py::class_<SubsetIndex>(m, "SubsetIndex")
        .def_readonly("indices", &SubsetIndex::indices)
        .def_readonly("n_total", &SubsetIndex::n_total)
        .def("__len__", [](const SubsetIndex& s) { return s.indices.size(); });

    m.def("sample_subset", &sample_subset, py::arg("n_total"), py::arg("k"), py::arg("rng"));

    // --- schedules ----------------------------------------------------------
    py::enum_<DecayKind>(m, "DecayKind")
        .value("exponential", DecayKind::exponential)
        .value("inverse_linear", DecayKind::inverse_linear)
        .value("logarithmic", DecayKind::logarithmic);

    py::class_<DecayFamily>(m, "DecayFamily")
        .def(py::init([](DecayKind kind, double alpha, double f_floor) {
                 return DecayFamily{kind, alpha, f_floor};
             }),
             py::arg("kind"), py::arg("alpha"), py::arg("f_floor") = 0.05)
        .def_readwrite("kind", &DecayFamily::kind)
        .def_readwrite("alpha", &DecayFamily::alpha)
        .def_readwrite("f_floor", &DecayFamily::f_floor);

    m.def("decay_fraction", &decay_fraction, py::arg("family"), py::arg("t"));
    m.def("base_trajectory", &base_trajectory, py::arg("config"), py::arg("t"));

    // --- sched-core ---------------------------------------------------------
    py::class_<Feedback>(m, "Feedback")
        .def(py::init<>())
        .def_readwrite("epoch", &Feedback::epoch)
        .def_readwrite("acc_curr", &Feedback::acc_curr)
        .def_readwrite("acc_prev", &Feedback::acc_prev)
        .def_readwrite("delta", &Feedback::delta);

    m.def("compute_feedback", &compute_feedback, py::arg("acc_curr"), py::arg("acc_prev"),
          py::arg("epoch"));

    py::enum_<Variant>(m, "Variant")
        .value("adaptive_alpha", Variant::adaptive_alpha)
        .value("adaptive_t", Variant::adaptive_t)
        .value("fixed_pdd", Variant::fixed_pdd)
        .value("full_baseline", Variant::full_baseline);

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("variant", &ControllerConfig::variant)
        .def_readwrite("family", &ControllerConfig::family)
        .def_readwrite("alpha_init", &ControllerConfig::alpha_init)
        .def_readwrite("alpha_min", &ControllerConfig::alpha_min)
        .def_readwrite("alpha_max", &ControllerConfig::alpha_max)
        .def_readwrite("eta_up", &ControllerConfig::eta_up)
        .def_readwrite("eta_down", &ControllerConfig::eta_down)
        .def_readwrite("delta_threshold", &ControllerConfig::delta_threshold)
        .def_readwrite("gamma", &ControllerConfig::gamma)
        .def_readwrite("tau", &ControllerConfig::tau)
        .def_readwrite("p0", &ControllerConfig::p0)
        .def_readwrite("f_floor", &ControllerConfig::f_floor)
        .def_readwrite("total_epochs", &ControllerConfig::total_epochs)
        .def_readwrite("pdd_ratio", &ControllerConfig::pdd_ratio)
        .def("validate", &ControllerConfig::validate);

    py::class_<ScheduleState>(m, "ScheduleState")
        .def(py::init<>())
        .def_readwrite("epoch", &ScheduleState::epoch)
        .def_readwrite("alpha", &ScheduleState::alpha)
        .def_readwrite("keep_fraction", &ScheduleState::keep_fraction)
        .def_readwrite("t0", &ScheduleState::t0);

    py::class_<EpochDecision>(m, "EpochDecision")
        .def(py::init<>())
        .def_readwrite("keep_fraction", &EpochDecision::keep_fraction)
        .def_readwrite("subset_size", &EpochDecision::subset_size)
        .def_readwrite("accepted", &EpochDecision::accepted)
        .def_readwrite("reheated", &EpochDecision::reheated)
        .def_readwrite("is_revision", &EpochDecision::is_revision);

    m.def("subset_size_for", &subset_size_for, py::arg("keep_fraction"), py::arg("n_total"));

    // --- controllers ----------------------------------------------------------
    py::class_<AcceptanceOutcome>(m, "AcceptanceOutcome")
        .def_readonly("probability", &AcceptanceOutcome::probability)
        .def_readonly("accepted", &AcceptanceOutcome::accepted)
        .def_readonly("uniform_draw", &AcceptanceOutcome::uniform_draw);

    m.def("accept",
          py::overload_cast<double, double, double, Xoshiro256PP&>(&accept), py::arg("delta"),
          py::arg("tau"), py::arg("p0"), py::arg("rng"));
    m.def("accept",
          py::overload_cast<double, double, double, const UniformFn&>(&accept), py::arg("delta"),
          py::arg("tau"), py::arg("p0"), py::arg("draw"));

    py::class_<Controller>(m, "Controller")
        .def(py::init<ControllerConfig>(), py::arg("config"))
        .def_property_readonly("config", &Controller::config)
        .def("initial_state", &Controller::initial_state)
        .def("begin_epoch",
             [](const Controller& c, const ScheduleState& state,
                const std::optional<Feedback>& feedback, std::int64_t n_total,
                Xoshiro256PP& rng) { return c.begin_epoch(state, feedback, n_total, rng); },
             py::arg("state"), py::arg("feedback"), py::arg("n_total"), py::arg("rng"))
        .def("begin_epoch",
             [](const Controller& c, const ScheduleState& state,
                const std::optional<Feedback>& feedback, std::int64_t n_total,
                const UniformFn& draw) { return c.begin_epoch(state, feedback, n_total, draw); },
             py::arg("state"), py::arg("feedback"), py::arg("n_total"), py::arg("draw"));

    // --- accounting ----------------------------------------------------------
    py::class_<EpochLedger>(m, "EpochLedger")
        .def(py::init<std::int64_t>(), py::arg("n_total"))
        .def_property_readonly("n_total", &EpochLedger::n_total)
        .def_property_readonly("sizes", &EpochLedger::sizes)
        .def("append", &EpochLedger::append, py::arg("subset_size"));

    m.def("effective_epochs", &effective_epochs, py::arg("ledger"));

    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("epoch", &TraceRecord::epoch)
        .def_readonly("subset_size", &TraceRecord::subset_size)
        .def_readonly("keep_fraction", &TraceRecord::keep_fraction)
        .def_readonly("alpha", &TraceRecord::alpha)
        .def_readonly("accuracy_full", &TraceRecord::accuracy_full)
        .def_readonly("accuracy_subset", &TraceRecord::accuracy_subset)
        .def_readonly("loss_full", &TraceRecord::loss_full)
        .def_readonly("delta", &TraceRecord::delta)
        .def_readonly("accepted", &TraceRecord::accepted)
        .def_readonly("reheated", &TraceRecord::reheated)
        .def_readonly("cumulative_ee", &TraceRecord::cumulative_ee);

    // --- trainer ----------------------------------------------------------
    py::enum_<SyntheticKind>(m, "SyntheticKind")
        .value("blobs", SyntheticKind::blobs)
        .value("spirals", SyntheticKind::spirals);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("features", &Dataset::features)
        .def_readwrite("labels", &Dataset::labels)
        .def_readwrite("n", &Dataset::n)
        .def_readwrite("dim", &Dataset::dim)
        .def_readwrite("n_classes", &Dataset::n_classes)
        .def("validate", &Dataset::validate);

    m.def("make_synthetic", &make_synthetic, py::arg("kind"), py::arg("n"), py::arg("dim"),
          py::arg("n_classes"), py::arg("noise"), py::arg("rng"));
    m.def("load_idx", &load_idx, py::arg("images_path"), py::arg("labels_path"));
    m.def("load_csv", &load_csv, py::arg("path"));
    m.def("save_csv", &save_csv, py::arg("dataset"), py::arg("path"));

    py::enum_<ModelKind>(m, "ModelKind")
        .value("softmax_regression", ModelKind::softmax_regression)
        .value("mlp1", ModelKind::mlp1);

    py::enum_<Activation>(m, "Activation")
        .value("relu", Activation::relu)
        .value("tanh", Activation::tanh);

    py::class_<Model>(m, "Model")
        .def_readonly("kind", &Model::kind)
        .def_readonly("input_dim", &Model::input_dim)
        .def_readonly("n_classes", &Model::n_classes)
        .def_readonly("hidden_dim", &Model::hidden_dim)
        .def_readonly("activation", &Model::activation)
        .def_readwrite("parameters", &Model::parameters);

    m.def("init_model", &init_model, py::arg("kind"), py::arg("input_dim"), py::arg("n_classes"),
          py::arg("hidden_dim"), py::arg("activation"), py::arg("rng"));

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("accuracy", &EvalResult::accuracy)
        .def_readonly("mean_loss", &EvalResult::mean_loss);

    m.def("forward_full", &forward_full, py::arg("model"), py::arg("dataset"));
    m.def("evaluate_subset", &evaluate_subset, py::arg("model"), py::arg("dataset"),
          py::arg("indices"));
    m.def("mean_gradient", &mean_gradient, py::arg("model"), py::arg("dataset"),
          py::arg("indices"));
    m.def("grad_check", &grad_check, py::arg("model"), py::arg("dataset"),
          py::arg("epsilon") = 1e-5);
    m.def("gradient_variance_probe", &gradient_variance_probe, py::arg("model"),
          py::arg("dataset"), py::arg("fraction"), py::arg("n_trials"), py::arg("rng"));

    py::class_<Optimizer>(m, "Optimizer")
        .def(py::init<>())
        .def_readwrite("learning_rate", &Optimizer::learning_rate)
        .def_readwrite("momentum", &Optimizer::momentum)
        .def_readwrite("weight_decay", &Optimizer::weight_decay)
        .def_readwrite("velocity", &Optimizer::velocity);

    m.def("train_epoch", &train_epoch, py::arg("model"), py::arg("dataset"), py::arg("subset"),
          py::arg("optimizer"), py::arg("batch_size"), py::arg("rng"));

    // --- harness ----------------------------------------------------------
    py::enum_<DatasetSource>(m, "DatasetSource")
        .value("blobs", DatasetSource::blobs)
        .value("spirals", DatasetSource::spirals)
        .value("idx", DatasetSource::idx)
        .value("csv", DatasetSource::csv);

    py::class_<DatasetSpec>(m, "DatasetSpec")
        .def(py::init<>())
        .def_readwrite("source", &DatasetSpec::source)
        .def_readwrite("n", &DatasetSpec::n)
        .def_readwrite("dim", &DatasetSpec::dim)
        .def_readwrite("n_classes", &DatasetSpec::n_classes)
        .def_readwrite("noise", &DatasetSpec::noise)
        .def_readwrite("images_path", &DatasetSpec::images_path)
        .def_readwrite("labels_path", &DatasetSpec::labels_path)
        .def_readwrite("csv_path", &DatasetSpec::csv_path);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("hidden_dim", &ModelSpec::hidden_dim)
        .def_readwrite("activation", &ModelSpec::activation);

    py::class_<OptimizerSpec>(m, "OptimizerSpec")
        .def(py::init<>())
        .def_readwrite("learning_rate", &OptimizerSpec::learning_rate)
        .def_readwrite("momentum", &OptimizerSpec::momentum)
        .def_readwrite("weight_decay", &OptimizerSpec::weight_decay);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("dataset", &ExperimentConfig::dataset)
        .def_readwrite("model", &ExperimentConfig::model)
        .def_readwrite("optimizer", &ExperimentConfig::optimizer)
        .def_readwrite("controller", &ExperimentConfig::controller)
        .def_readwrite("batch_size", &ExperimentConfig::batch_size)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("validate", &ExperimentConfig::validate);

    m.def("parse_config_text", &parse_config_text, py::arg("text"),
          py::arg("origin") = "<string>");
    m.def("load_config", &load_config, py::arg("path"));
    m.def("build_dataset", &build_dataset, py::arg("config"));
    m.def("build_model", &build_model, py::arg("config"), py::arg("dataset"));

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("final_accuracy_full", &RunSummary::final_accuracy_full)
        .def_readonly("best_accuracy_full", &RunSummary::best_accuracy_full)
        .def_readonly("effective_epochs", &RunSummary::effective_epochs)
        .def_readonly("forward_epochs", &RunSummary::forward_epochs)
        .def_readonly("n_reheats", &RunSummary::n_reheats)
        .def_readonly("n_rejections", &RunSummary::n_rejections)
        .def_readonly("wall_seconds", &RunSummary::wall_seconds);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("summary", &RunResult::summary)
        .def_readonly("trace", &RunResult::trace);

    m.def("summary_json", &summary_json, py::arg("summary"));
    m.def("run_experiment", &run_experiment, py::arg("config"));
    m.def("matched_baseline", &matched_baseline, py::arg("config"), py::arg("target_ee"));

    py::class_<CompareRow>(m, "CompareRow")
        .def_readonly("method", &CompareRow::method)
        .def_readonly("n_seeds", &CompareRow::n_seeds)
        .def_readonly("accuracy_mean", &CompareRow::accuracy_mean)
        .def_readonly("accuracy_std", &CompareRow::accuracy_std)
        .def_readonly("effective_epochs_mean", &CompareRow::effective_epochs_mean)
        .def_readonly("effective_epochs_std", &CompareRow::effective_epochs_std)
        .def_readonly("pareto", &CompareRow::pareto);

    m.def("compare", &compare, py::arg("runs"), py::arg("seeds") = std::vector<std::uint64_t>{});
    m.def("pareto_csv", &pareto_csv, py::arg("rows"));
}
