#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "adadrop/rng.hpp"
#include "adadrop/types.hpp"

namespace adadrop {

// Outcome of one stochastic acceptance test.
struct AcceptanceOutcome {
    double probability = 1.0;
    bool accepted = true;
    double uniform_draw = 0.0;
};

// Source of uniform variates in [0,1). A plain callable so tests can force
// acceptance or rejection deterministically.
using UniformFn = std::function<double()>;

UniformFn uniform_source(Xoshiro256PP& rng);

// Metropolis-style acceptance: improving deltas always accept; otherwise
// accept with probability p0 * exp(delta / tau). Consumes exactly one draw.
AcceptanceOutcome accept(double delta, double tau, double p0, const UniformFn& draw);
AcceptanceOutcome accept(double delta, double tau, double p0, Xoshiro256PP& rng);

using StepResult = std::pair<ScheduleState, EpochDecision>;

// Per-variant steps for epochs >= 2. `state.epoch` is the epoch being
// decided; `feedback` is the signal from the epoch that just completed.
StepResult adaptive_alpha_step(const ScheduleState& state, const Feedback& feedback,
                               const ControllerConfig& config, std::int64_t n_total,
                               const UniformFn& draw);
StepResult adaptive_t_step(const ScheduleState& state, const Feedback& feedback,
                           const ControllerConfig& config, std::int64_t n_total,
                           const UniformFn& draw);
StepResult fixed_pdd_step(const ScheduleState& state, const ControllerConfig& config,
                          std::int64_t n_total);
StepResult full_baseline_step(const ScheduleState& state, const ControllerConfig& config,
                              std::int64_t n_total);

// The uniform scheduler interface the trainer drives. Pure state machine:
// state in, state out; the final epoch is always forced to the full dataset.
class Controller {
public:
    explicit Controller(ControllerConfig config);

    const ControllerConfig& config() const { return config_; }

    ScheduleState initial_state() const;

    // Decides epoch `state.epoch`. `feedback` must be absent exactly at
    // epoch 1; calling past total_epochs signals a harness bug.
    StepResult begin_epoch(const ScheduleState& state, const std::optional<Feedback>& feedback,
                           std::int64_t n_total, const UniformFn& draw) const;
    StepResult begin_epoch(const ScheduleState& state, const std::optional<Feedback>& feedback,
                           std::int64_t n_total, Xoshiro256PP& rng) const;

private:
    ControllerConfig config_;
};

}  // namespace adadrop
