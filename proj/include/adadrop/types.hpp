#pragma once

#include <cstdint>
#include <string>

#include "adadrop/schedules.hpp"

namespace adadrop {

// Feedback signal observed after a completed epoch: the change in
// full-dataset training accuracy relative to the previous epoch.
struct Feedback {
    std::int64_t epoch = 0;  // 1-based index of the completed epoch
    double acc_curr = 0.0;   // A_t
    double acc_prev = 0.0;   // A_{t-1} (A_0 is measured before any training)
    double delta = 0.0;      // A_t - A_{t-1}
};

Feedback compute_feedback(double acc_curr, double acc_prev, std::int64_t epoch);

enum class Variant {
    adaptive_alpha,
    adaptive_t,
    fixed_pdd,
    full_baseline,
};

const char* to_string(Variant v);
Variant variant_from_string(const std::string& name);

// All controller knobs in one place. Defaults follow the library-wide
// conventions; validate() enforces the cross-field constraints.
struct ControllerConfig {
    Variant variant = Variant::full_baseline;
    DecayKind family = DecayKind::logarithmic;
    double alpha_init = 0.2;
    double alpha_min = 1e-3;
    double alpha_max = 10.0;
    double eta_up = 0.2;          // multiplicative alpha increase on acceptance
    double eta_down = 0.2;        // multiplicative alpha decrease on rejection
    double delta_threshold = 0.0; // delta above which Adaptive-T follows the schedule
    double gamma = 1.5;           // reheating factor, > 1
    double tau = 0.02;            // acceptance temperature
    double p0 = 0.5;              // acceptance probability at delta = 0
    double f_floor = 0.05;        // minimum keep-fraction
    std::int64_t total_epochs = 1;
    double pdd_ratio = 0.7;       // fixed-schedule geometric decay ratio

    void validate() const;
    DecayFamily decay_family(double alpha) const { return DecayFamily{family, alpha, f_floor}; }
};

// Evolving controller state. `epoch` is the 1-based index of the epoch the
// next begin_epoch call will decide; `keep_fraction` is the most recently
// realized fraction (T_{epoch-1}), `t0` the initial/max keep-fraction.
struct ScheduleState {
    std::int64_t epoch = 1;
    double alpha = 0.0;
    double keep_fraction = 1.0;
    double t0 = 1.0;
};

// One epoch's scheduling outcome.
struct EpochDecision {
    double keep_fraction = 1.0;
    std::int64_t subset_size = 0;
    bool accepted = true;   // stochastic-acceptance outcome (true when no test ran)
    bool reheated = false;  // Adaptive-T reheat fired this epoch
    bool is_revision = false;  // mandatory final full-data epoch
};

// Size rule shared by every controller: round half up, at least one sample.
std::int64_t subset_size_for(double keep_fraction, std::int64_t n_total);

}  // namespace adadrop
