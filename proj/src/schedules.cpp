#include "adadrop/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adadrop/types.hpp"

namespace adadrop {

const char* to_string(DecayKind k) {
    switch (k) {
        case DecayKind::exponential: return "exponential";
        case DecayKind::inverse_linear: return "inverse_linear";
        case DecayKind::logarithmic: return "logarithmic";
    }
    return "?";
}

DecayKind decay_kind_from_string(const std::string& name) {
    if (name == "exponential") return DecayKind::exponential;
    if (name == "inverse_linear") return DecayKind::inverse_linear;
    if (name == "logarithmic") return DecayKind::logarithmic;
    throw std::invalid_argument("unknown decay family: " + name);
}

double decay_fraction(const DecayFamily& family, std::int64_t t) {
    if (t < 1)
        throw std::invalid_argument("decay_fraction: t must be >= 1, got " + std::to_string(t));
    const double steps = static_cast<double>(t - 1);
    double raw = 1.0;
    switch (family.kind) {
        case DecayKind::exponential:
            raw = std::exp(-family.alpha * steps);
            break;
        case DecayKind::inverse_linear:
            raw = 1.0 / (1.0 + family.alpha * steps);
            break;
        case DecayKind::logarithmic:
            raw = 1.0 - family.alpha * std::log(static_cast<double>(t));
            break;
    }
    return std::max(family.f_floor, std::min(1.0, raw));
}

double base_trajectory(const ControllerConfig& config, std::int64_t t) {
    return decay_fraction(config.decay_family(config.alpha_init), t);
}

}  // namespace adadrop
