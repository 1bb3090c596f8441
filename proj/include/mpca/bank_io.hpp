#pragma once

#include "mpca/condition.hpp"
#include "mpca/monitor.hpp"

#include <string>
#include <vector>

namespace mpca {

/// Persist the bank as a single JSON document with an explicit
/// format_version and a checksum over the payload. Reals keep full
/// double precision (shortest round-trip text), so save/load is lossless.
void save_bank(const ModelBank& bank, const std::string& path);
ModelBank load_bank(const std::string& path);

/// CSV columns: sample_index, timestamp, condition_id, t2, spe, phi,
/// t2_limit, spe_limit, phi_limit, alarm. Unmatched samples write "none"
/// for the condition and leave the numeric fields empty.
void write_monitor_report(const std::vector<MonitorRecord>& records, const std::string& path);
std::vector<MonitorRecord> read_monitor_report(const std::string& path);

} // namespace mpca
