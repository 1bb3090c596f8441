#pragma once

#include "mpca/dataset.hpp"
#include "mpca/matrix.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace mpca {

/// Per-variable z-score parameters (sample std, n-1 denominator).
struct StandardizationParams {
    Vector mu;
    Vector sigma; // all > 0

    std::size_t size() const { return mu.size(); }
};

struct CleaningReport {
    std::vector<std::size_t> outliers_removed; // per variable, cells that triggered
    std::size_t transients_removed = 0;        // rows removed by the step rule
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
};

/// Remove rows containing an outlying cell: a point is rejected when
/// n * erfc(|x - mu| / (sigma * sqrt(2))) < 0.5, with mu/sigma taken from
/// the input column. Single pass, row-wise removal.
std::pair<TimeSeriesDataset, CleaningReport>
chauvenet_filter(const TimeSeriesDataset& data);

/// Remove rows whose first difference exceeds k_sigma times the std of the
/// column's first differences. The first row is never removed; variables
/// with (near-)constant differences are skipped.
std::pair<TimeSeriesDataset, CleaningReport>
transient_filter(const TimeSeriesDataset& data, double k_sigma = 3.0);

StandardizationParams fit_standardization(const Matrix& values);
Matrix apply_standardization(const Matrix& values, const StandardizationParams& params);
Vector apply_standardization(const Vector& row, const StandardizationParams& params);

/// Haar wavelet shrinkage per variable: soft-threshold the detail
/// coefficients at the universal threshold sigma_hat * sqrt(2 ln n),
/// sigma_hat = median(|d1|)/0.6745. Length is preserved (symmetric
/// extension to a power of two, trimmed after the inverse transform).
TimeSeriesDataset wavelet_denoise(const TimeSeriesDataset& data, int levels = 1);

double column_mean(const Vector& col);
/// Sample standard deviation (n-1 denominator).
double column_stddev(const Vector& col);

} // namespace mpca
