#pragma once

#include <cstdint>
#include <string>

namespace adadrop {

// Monotonically decreasing decay-fraction families. All are parameterized so
// that f(1) = 1: the first epoch always sees the full dataset.
enum class DecayKind {
    exponential,     // exp(-alpha * (t - 1))
    inverse_linear,  // 1 / (1 + alpha * (t - 1))
    logarithmic,     // 1 - alpha * ln(t)
};

const char* to_string(DecayKind k);
DecayKind decay_kind_from_string(const std::string& name);

struct DecayFamily {
    DecayKind kind = DecayKind::logarithmic;
    double alpha = 0.2;
    double f_floor = 0.05;
};

// f(t; alpha) clamped into [f_floor, 1]. Total on t >= 1.
double decay_fraction(const DecayFamily& family, std::int64_t t);

struct ControllerConfig;

// The Adaptive-T target trajectory: the config's family evaluated at the
// fixed alpha_init (Adaptive-T never mutates this alpha).
double base_trajectory(const ControllerConfig& config, std::int64_t t);

}  // namespace adadrop
