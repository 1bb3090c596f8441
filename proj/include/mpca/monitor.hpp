#pragma once

#include "mpca/condition.hpp"
#include "mpca/dataset.hpp"
#include "mpca/pca.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpca {

enum class Alarm { normal, fault, unmatched };

std::string alarm_to_string(Alarm a);
Alarm alarm_from_string(const std::string& s);

/// Per-sample monitoring outcome. Unmatched samples carry no indices or
/// limits; matched samples alarm exactly when phi exceeds its limit.
struct MonitorRecord {
    std::size_t sample_index = 0;
    std::int64_t timestamp = 0;
    std::optional<int> condition_id;
    std::optional<IndexTriple> indices;
    std::optional<IndexTriple> limits; // t2/spe/phi control limits of the matched condition
    Alarm alarm = Alarm::normal;
};

/// Score every sample against the bank: global standardization for matching,
/// the matched condition's own standardization for the indices. Order
/// preserving; no samples are dropped online.
std::vector<MonitorRecord> monitor_stream(const TimeSeriesDataset& data, const ModelBank& bank);

struct DetectionReport {
    std::size_t n_test = 0;    // records at/after the fault start
    std::size_t n_matched = 0; // those matched to a condition
    std::size_t n_alarms = 0;  // those flagged fault
    double detection_rate = 0.0;       // alarms / matched
    double detection_rate_total = 0.0; // alarms / all
    std::optional<std::size_t> first_exceed_index;
    std::optional<std::size_t> first_sustained_index; // start of first run of >= r alarms
    std::map<std::string, std::size_t> per_condition_counts; // condition id or "none"
};

DetectionReport detection_metrics(const std::vector<MonitorRecord>& records,
                                  std::size_t fault_start_index, std::size_t run_length_r = 10);

} // namespace mpca
