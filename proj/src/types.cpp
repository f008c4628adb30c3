#include "adadrop/types.hpp"

#include <cmath>
#include <stdexcept>

#include "adadrop/errors.hpp"

namespace adadrop {

Feedback compute_feedback(double acc_curr, double acc_prev, std::int64_t epoch) {
    if (!(acc_curr >= 0.0 && acc_curr <= 1.0))
        throw std::invalid_argument("compute_feedback: acc_curr outside [0,1]: " +
                                    std::to_string(acc_curr));
    if (!(acc_prev >= 0.0 && acc_prev <= 1.0))
        throw std::invalid_argument("compute_feedback: acc_prev outside [0,1]: " +
                                    std::to_string(acc_prev));
    if (epoch < 1)
        throw std::invalid_argument("compute_feedback: epoch must be >= 1, got " +
                                    std::to_string(epoch));
    return Feedback{epoch, acc_curr, acc_prev, acc_curr - acc_prev};
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::adaptive_alpha: return "adaptive_alpha";
        case Variant::adaptive_t: return "adaptive_t";
        case Variant::fixed_pdd: return "fixed_pdd";
        case Variant::full_baseline: return "full_baseline";
    }
    return "?";
}

Variant variant_from_string(const std::string& name) {
    if (name == "adaptive_alpha") return Variant::adaptive_alpha;
    if (name == "adaptive_t") return Variant::adaptive_t;
    if (name == "fixed_pdd") return Variant::fixed_pdd;
    if (name == "full_baseline") return Variant::full_baseline;
    throw std::invalid_argument("unknown controller variant: " + name);
}

void ControllerConfig::validate() const {
    if (!(alpha_init > 0.0) || !(alpha_min > 0.0) || !(alpha_max > 0.0))
        throw ConfigError("controller: alpha values must be positive");
    if (alpha_min > alpha_init || alpha_init > alpha_max)
        throw ConfigError("controller: require alpha_min <= alpha_init <= alpha_max");
    if (!(eta_up > 0.0 && eta_up < 1.0) || !(eta_down > 0.0 && eta_down < 1.0))
        throw ConfigError("controller: eta_up and eta_down must be in (0,1)");
    if (!(delta_threshold >= 0.0))
        throw ConfigError("controller: delta_threshold must be >= 0");
    if (!(gamma > 1.0))
        throw ConfigError("controller: gamma must be > 1");
    if (!(tau > 0.0))
        throw ConfigError("controller: tau must be > 0");
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw ConfigError("controller: p0 must be in (0,1]");
    if (!(f_floor > 0.0 && f_floor < 1.0))
        throw ConfigError("controller: f_floor must be in (0,1)");
    if (total_epochs < 1)
        throw ConfigError("controller: total_epochs must be >= 1");
    if (!(pdd_ratio > 0.0 && pdd_ratio < 1.0))
        throw ConfigError("controller: pdd_ratio must be in (0,1)");
}

std::int64_t subset_size_for(double keep_fraction, std::int64_t n_total) {
    const double rounded = std::floor(keep_fraction * static_cast<double>(n_total) + 0.5);
    const auto size = static_cast<std::int64_t>(rounded);
    return size < 1 ? 1 : size;
}

}  // namespace adadrop
