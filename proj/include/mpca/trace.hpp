#pragma once

#include "mpca/monitor.hpp"

#include <string>
#include <vector>

namespace mpca {

/// Standalone SVG line chart of the combined index per sample with a
/// horizontal control-limit line, plus the underlying two-column CSV
/// (sample_index, phi). Unmatched samples carry no index and are skipped.
void write_phi_trace(const std::vector<MonitorRecord>& records, const std::string& svg_path,
                     const std::string& csv_path);

} // namespace mpca
