#pragma once

#include "mpca/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mpca {

/// Timestamped sample matrix with per-sample categorical tags.
/// Invariants: timestamps strictly increasing; values is n x m with no
/// non-finite cells; every meta tag is present on every sample.
struct TimeSeriesDataset {
    std::vector<std::int64_t> timestamps; // epoch seconds
    std::vector<std::string> variable_names;
    Matrix values;
    std::vector<std::string> meta_names; // tag names, "meta:" prefix stripped
    std::vector<std::vector<std::string>> meta_rows; // n rows x meta_names.size()

    std::size_t n_samples() const { return timestamps.size(); }
    std::size_t n_variables() const { return variable_names.size(); }

    /// Index of a numeric variable, or -1.
    int variable_index(const std::string& name) const;
    /// Index of a meta tag, or -1.
    int meta_index(const std::string& tag) const;

    /// New dataset keeping the rows flagged true, in original order.
    TimeSeriesDataset select_rows(const std::vector<bool>& keep) const;

    /// Throws Error(InvalidData/Format) when an invariant is broken.
    void validate() const;
};

struct CsvReadResult {
    TimeSeriesDataset data;
    std::size_t rows_read = 0;    // data rows seen in the source
    std::size_t rows_dropped = 0; // rows discarded for missing/bad cells
};

/// Read a sensor CSV: header row, first column ISO-8601 timestamps, numeric
/// sensor columns, and categorical columns marked by a "meta:" name prefix
/// or listed in meta_columns. Rows with any unparseable numeric cell (or
/// timestamp) are dropped and counted.
CsvReadResult read_csv(const std::string& path,
                       const std::vector<std::string>& meta_columns = {});

/// Write a dataset in the same layout read_csv accepts. Numeric cells use
/// shortest round-trip formatting, so the output is byte-stable.
void write_csv(const TimeSeriesDataset& data, const std::string& path);

std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t epoch_seconds);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Split one CSV line honoring double-quote escaping.
std::vector<std::string> split_csv_line(const std::string& line);
/// Quote a field if it contains a delimiter, quote, or newline.
std::string csv_escape(const std::string& field);

} // namespace mpca
