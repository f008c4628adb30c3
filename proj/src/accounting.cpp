#include "adadrop/accounting.hpp"

#include <cstdio>
#include <stdexcept>

namespace adadrop {

EpochLedger::EpochLedger(std::int64_t n_total) : n_total_(n_total) {
    if (n_total < 1)
        throw std::invalid_argument("EpochLedger: n_total must be >= 1, got " +
                                    std::to_string(n_total));
}

void EpochLedger::append(std::int64_t subset_size) {
    if (subset_size < 1 || subset_size > n_total_)
        throw std::invalid_argument("EpochLedger: subset size " + std::to_string(subset_size) +
                                    " outside [1, " + std::to_string(n_total_) + "]");
    sizes_.push_back(subset_size);
    sum_ += subset_size;
}

double effective_epochs(const EpochLedger& ledger) {
    return static_cast<double>(ledger.size_sum()) / static_cast<double>(ledger.n_total());
}

TraceRecord record_epoch(EpochLedger& ledger, std::int64_t epoch, const EpochDecision& decision,
                         const EpochMetrics& metrics) {
    ledger.append(decision.subset_size);
    TraceRecord record;
    record.epoch = epoch;
    record.subset_size = decision.subset_size;
    record.keep_fraction = decision.keep_fraction;
    record.alpha = metrics.alpha;
    record.accuracy_full = metrics.accuracy_full;
    record.accuracy_subset = metrics.accuracy_subset;
    record.loss_full = metrics.loss_full;
    record.delta = metrics.delta;
    record.accepted = decision.accepted;
    record.reheated = decision.reheated;
    record.cumulative_ee = effective_epochs(ledger);
    return record;
}

namespace {

std::string real17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace

std::string trace_csv_header() {
    return "epoch,subset_size,keep_fraction,alpha,accuracy_full,accuracy_subset,"
           "loss_full,delta,accepted,reheated,cumulative_ee";
}

std::string trace_csv_row(const TraceRecord& r) {
    std::string row;
    row.reserve(160);
    row += std::to_string(r.epoch);
    row += ',';
    row += std::to_string(r.subset_size);
    row += ',';
    row += real17(r.keep_fraction);
    row += ',';
    if (r.alpha) row += real17(*r.alpha);
    row += ',';
    row += real17(r.accuracy_full);
    row += ',';
    row += real17(r.accuracy_subset);
    row += ',';
    row += real17(r.loss_full);
    row += ',';
    row += real17(r.delta);
    row += ',';
    row += r.accepted ? '1' : '0';
    row += ',';
    row += r.reheated ? '1' : '0';
    row += ',';
    row += real17(r.cumulative_ee);
    return row;
}

}  // namespace adadrop
