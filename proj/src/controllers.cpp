#include "adadrop/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adadrop {

UniformFn uniform_source(Xoshiro256PP& rng) {
    return [&rng]() { return uniform01(rng); };
}

AcceptanceOutcome accept(double delta, double tau, double p0, const UniformFn& draw) {
    if (!(tau > 0.0))
        throw std::invalid_argument("accept: tau must be > 0, got " + std::to_string(tau));
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::invalid_argument("accept: p0 must be in (0,1], got " + std::to_string(p0));
    const double probability = delta > 0.0 ? 1.0 : p0 * std::exp(delta / tau);
    const double u = draw();
    return AcceptanceOutcome{probability, u < probability, u};
}

AcceptanceOutcome accept(double delta, double tau, double p0, Xoshiro256PP& rng) {
    return accept(delta, tau, p0, uniform_source(rng));
}

namespace {

// Applies the size rule and the mandatory final-epoch revision, then
// advances the state to the next epoch.
StepResult finalize(const ControllerConfig& config, const ScheduleState& state, double new_alpha,
                    double fraction, bool accepted, bool reheated, std::int64_t n_total) {
    const std::int64_t t = state.epoch;
    const bool is_revision = (t == config.total_epochs);
    const double f = is_revision ? 1.0 : fraction;

    EpochDecision decision;
    decision.keep_fraction = f;
    decision.subset_size = is_revision ? n_total : subset_size_for(f, n_total);
    decision.accepted = accepted;
    decision.reheated = reheated;
    decision.is_revision = is_revision;

    ScheduleState next;
    next.epoch = t + 1;
    next.alpha = new_alpha;
    next.keep_fraction = f;
    next.t0 = state.t0;
    return {next, decision};
}

}  // namespace

StepResult adaptive_alpha_step(const ScheduleState& state, const Feedback& feedback,
                               const ControllerConfig& config, std::int64_t n_total,
                               const UniformFn& draw) {
    double alpha = state.alpha;
    bool accepted = true;
    if (feedback.delta > 0.0) {
        alpha = std::min(config.alpha_max, alpha * (1.0 + config.eta_up));
    } else {
        const AcceptanceOutcome outcome = accept(feedback.delta, config.tau, config.p0, draw);
        accepted = outcome.accepted;
        alpha = accepted ? std::min(config.alpha_max, alpha * (1.0 + config.eta_up))
                         : std::max(config.alpha_min, alpha * (1.0 - config.eta_down));
    }
    const double fraction = decay_fraction(config.decay_family(alpha), state.epoch);
    return finalize(config, state, alpha, fraction, accepted, /*reheated=*/false, n_total);
}

StepResult adaptive_t_step(const ScheduleState& state, const Feedback& feedback,
                           const ControllerConfig& config, std::int64_t n_total,
                           const UniformFn& draw) {
    bool accepted = true;
    bool reheated = false;
    double fraction;
    if (feedback.delta > config.delta_threshold) {
        fraction = base_trajectory(config, state.epoch);
    } else {
        const AcceptanceOutcome outcome = accept(feedback.delta, config.tau, config.p0, draw);
        accepted = outcome.accepted;
        if (accepted) {
            fraction = base_trajectory(config, state.epoch);
        } else {
            fraction = std::min(state.t0, config.gamma * state.keep_fraction);
            reheated = true;
        }
    }
    return finalize(config, state, state.alpha, fraction, accepted, reheated, n_total);
}

StepResult fixed_pdd_step(const ScheduleState& state, const ControllerConfig& config,
                          std::int64_t n_total) {
    const double raw = std::pow(config.pdd_ratio, static_cast<double>(state.epoch - 1));
    const double fraction = std::max(config.f_floor, raw);
    return finalize(config, state, state.alpha, fraction, /*accepted=*/true, /*reheated=*/false,
                    n_total);
}

StepResult full_baseline_step(const ScheduleState& state, const ControllerConfig& config,
                              std::int64_t n_total) {
    return finalize(config, state, state.alpha, 1.0, /*accepted=*/true, /*reheated=*/false,
                    n_total);
}

Controller::Controller(ControllerConfig config) : config_(std::move(config)) {
    config_.validate();
}

ScheduleState Controller::initial_state() const {
    ScheduleState state;
    state.epoch = 1;
    state.alpha = config_.alpha_init;
    state.keep_fraction = 1.0;
    state.t0 = 1.0;
    return state;
}

StepResult Controller::begin_epoch(const ScheduleState& state,
                                   const std::optional<Feedback>& feedback, std::int64_t n_total,
                                   const UniformFn& draw) const {
    const std::int64_t t = state.epoch;
    if (t < 1)
        throw std::invalid_argument("begin_epoch: state.epoch must be >= 1, got " +
                                    std::to_string(t));
    if (t > config_.total_epochs)
        throw std::invalid_argument("begin_epoch: epoch " + std::to_string(t) +
                                    " is beyond total_epochs " +
                                    std::to_string(config_.total_epochs));
    if (n_total < 1)
        throw std::invalid_argument("begin_epoch: n_total must be >= 1");
    if (t == 1 && feedback.has_value())
        throw std::invalid_argument("begin_epoch: no feedback exists before the first epoch");
    if (t > 1) {
        if (!feedback.has_value())
            throw std::invalid_argument("begin_epoch: feedback required from epoch 2 onward");
        if (feedback->epoch != t - 1)
            throw std::invalid_argument("begin_epoch: feedback is for epoch " +
                                        std::to_string(feedback->epoch) + ", expected " +
                                        std::to_string(t - 1));
    }

    StepResult result;
    if (t == 1) {
        // Every family satisfies f(1) = 1, so the first epoch is full data.
        double fraction = 1.0;
        switch (config_.variant) {
            case Variant::adaptive_alpha:
                fraction = decay_fraction(config_.decay_family(state.alpha), 1);
                break;
            case Variant::adaptive_t:
                fraction = base_trajectory(config_, 1);
                break;
            case Variant::fixed_pdd:
            case Variant::full_baseline:
                fraction = 1.0;
                break;
        }
        result = finalize(config_, state, state.alpha, fraction, /*accepted=*/true,
                          /*reheated=*/false, n_total);
    } else {
        switch (config_.variant) {
            case Variant::adaptive_alpha:
                result = adaptive_alpha_step(state, *feedback, config_, n_total, draw);
                break;
            case Variant::adaptive_t:
                result = adaptive_t_step(state, *feedback, config_, n_total, draw);
                break;
            case Variant::fixed_pdd:
                result = fixed_pdd_step(state, config_, n_total);
                break;
            case Variant::full_baseline:
                result = full_baseline_step(state, config_, n_total);
                break;
        }
    }
    return result;
}

StepResult Controller::begin_epoch(const ScheduleState& state,
                                   const std::optional<Feedback>& feedback, std::int64_t n_total,
                                   Xoshiro256PP& rng) const {
    return begin_epoch(state, feedback, n_total, uniform_source(rng));
}

}  // namespace adadrop
