#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adadrop/types.hpp"

namespace adadrop {

// Per-epoch subset sizes. The sum is kept in integer arithmetic and divided
// by N only when read, so effective epochs never drift over long runs.
class EpochLedger {
public:
    explicit EpochLedger(std::int64_t n_total);

    std::int64_t n_total() const { return n_total_; }
    const std::vector<std::int64_t>& sizes() const { return sizes_; }
    std::int64_t size_sum() const { return sum_; }
    std::int64_t epochs_completed() const { return static_cast<std::int64_t>(sizes_.size()); }

    void append(std::int64_t subset_size);

private:
    std::int64_t n_total_;
    std::int64_t sum_ = 0;
    std::vector<std::int64_t> sizes_;
};

// Effective Epochs: sum of the per-epoch subset sizes over N.
double effective_epochs(const EpochLedger& ledger);

// Post-epoch measurements the scheduler does not compute itself.
struct EpochMetrics {
    double accuracy_full = 0.0;
    double accuracy_subset = 0.0;
    double loss_full = 0.0;
    double delta = 0.0;
    std::optional<double> alpha;  // present for Adaptive-alpha only
};

// One CSV row of per-epoch telemetry.
struct TraceRecord {
    std::int64_t epoch = 0;
    std::int64_t subset_size = 0;
    double keep_fraction = 1.0;
    std::optional<double> alpha;
    double accuracy_full = 0.0;
    double accuracy_subset = 0.0;
    double loss_full = 0.0;
    double delta = 0.0;
    bool accepted = true;
    bool reheated = false;
    double cumulative_ee = 0.0;
};

// Appends the epoch to the ledger and materializes its trace row.
TraceRecord record_epoch(EpochLedger& ledger, std::int64_t epoch, const EpochDecision& decision,
                         const EpochMetrics& metrics);

// Fixed column order; reals carry 17 significant digits so traces are
// byte-reproducible. An absent alpha serializes as an empty field.
std::string trace_csv_header();
std::string trace_csv_row(const TraceRecord& record);

}  // namespace adadrop
