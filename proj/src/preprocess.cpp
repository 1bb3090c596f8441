#include "mpca/preprocess.hpp"

#include "mpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpca {

double column_mean(const Vector& col) {
    double s = 0.0;
    for (double v : col) s += v;
    return col.empty() ? 0.0 : s / static_cast<double>(col.size());
}

double column_stddev(const Vector& col) {
    if (col.size() < 2) return 0.0;
    double m = column_mean(col);
    double s = 0.0;
    for (double v : col) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(col.size() - 1));
}

std::pair<TimeSeriesDataset, CleaningReport>
chauvenet_filter(const TimeSeriesDataset& data) {
    const std::size_t n = data.n_samples();
    const std::size_t m = data.n_variables();
    if (n < 4)
        throw Error(ErrorKind::TooFewSamples,
                    "chauvenet_filter: need at least 4 samples, got " + std::to_string(n));

    CleaningReport report;
    report.rows_in = n;
    report.outliers_removed.assign(m, 0);

    std::vector<bool> keep(n, true);
    const double inv_sqrt2 = 0.7071067811865475244008444;
    for (std::size_t j = 0; j < m; ++j) {
        Vector col = data.values.column(j);
        double mu = column_mean(col);
        double sigma = column_stddev(col);
        if (sigma <= 0.0)
            throw Error(ErrorKind::DegenerateColumn,
                        "chauvenet_filter: constant column '" + data.variable_names[j] + "'");
        for (std::size_t i = 0; i < n; ++i) {
            double z = std::abs(col[i] - mu) / sigma;
            if (static_cast<double>(n) * std::erfc(z * inv_sqrt2) < 0.5) {
                keep[i] = false;
                ++report.outliers_removed[j];
            }
        }
    }

    TimeSeriesDataset filtered = data.select_rows(keep);
    report.rows_out = filtered.n_samples();
    return {std::move(filtered), report};
}

std::pair<TimeSeriesDataset, CleaningReport>
transient_filter(const TimeSeriesDataset& data, double k_sigma) {
    const std::size_t n = data.n_samples();
    const std::size_t m = data.n_variables();
    if (n < 3)
        throw Error(ErrorKind::TooFewSamples,
                    "transient_filter: need at least 3 samples, got " + std::to_string(n));

    CleaningReport report;
    report.rows_in = n;
    report.outliers_removed.assign(m, 0);

    std::vector<bool> keep(n, true);
    for (std::size_t j = 0; j < m; ++j) {
        Vector diffs(n - 1);
        for (std::size_t i = 1; i < n; ++i) diffs[i - 1] = data.values(i, j) - data.values(i - 1, j);
        double mu_d = column_mean(diffs);
        double sigma_d = column_stddev(diffs);
        // constant differences (exactly, or up to roundoff on a ramp): rule skipped
        if (sigma_d <= 1e-6 * std::abs(mu_d)) continue;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(diffs[i - 1]) > k_sigma * sigma_d) keep[i] = false;
        }
    }

    TimeSeriesDataset filtered = data.select_rows(keep);
    report.rows_out = filtered.n_samples();
    report.transients_removed = report.rows_in - report.rows_out;
    return {std::move(filtered), report};
}

StandardizationParams fit_standardization(const Matrix& values) {
    const std::size_t n = values.rows();
    const std::size_t m = values.cols();
    if (n < 2)
        throw Error(ErrorKind::TooFewSamples, "fit_standardization: need at least 2 samples");
    StandardizationParams p;
    p.mu.resize(m);
    p.sigma.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        Vector col = values.column(j);
        p.mu[j] = column_mean(col);
        p.sigma[j] = column_stddev(col);
        if (p.sigma[j] <= 0.0)
            throw Error(ErrorKind::DegenerateColumn,
                        "fit_standardization: constant column " + std::to_string(j));
    }
    return p;
}

Matrix apply_standardization(const Matrix& values, const StandardizationParams& params) {
    if (values.cols() != params.size())
        throw Error(ErrorKind::SchemaMismatch,
                    "apply_standardization: column count mismatch");
    Matrix z(values.rows(), values.cols());
    for (std::size_t i = 0; i < values.rows(); ++i)
        for (std::size_t j = 0; j < values.cols(); ++j)
            z(i, j) = (values(i, j) - params.mu[j]) / params.sigma[j];
    return z;
}

Vector apply_standardization(const Vector& row, const StandardizationParams& params) {
    if (row.size() != params.size())
        throw Error(ErrorKind::SchemaMismatch,
                    "apply_standardization: column count mismatch");
    Vector z(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        z[j] = (row[j] - params.mu[j]) / params.sigma[j];
    return z;
}

namespace {

double median_abs(Vector v) {
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double soft_threshold(double d, double t) {
    if (d > t) return d - t;
    if (d < -t) return d + t;
    return 0.0;
}

} // namespace

TimeSeriesDataset wavelet_denoise(const TimeSeriesDataset& data, int levels) {
    const std::size_t n = data.n_samples();
    if (levels < 1)
        throw Error(ErrorKind::InvalidParameter, "wavelet_denoise: levels must be >= 1");
    if (n < (std::size_t{1} << levels))
        throw Error(ErrorKind::TooFewSamples,
                    "wavelet_denoise: need at least 2^levels samples");

    std::size_t padded = 1;
    while (padded < n) padded <<= 1;

    const double inv_sqrt2 = 0.7071067811865475244008444;
    TimeSeriesDataset out = data;

    for (std::size_t j = 0; j < data.n_variables(); ++j) {
        Vector x(padded);
        for (std::size_t i = 0; i < n; ++i) x[i] = data.values(i, j);
        for (std::size_t i = n; i < padded; ++i) x[i] = x[2 * n - 2 - i]; // mirror

        // forward transform: approx in front, details recorded per level
        std::vector<Vector> details(static_cast<std::size_t>(levels));
        Vector approx = x;
        for (int lev = 0; lev < levels; ++lev) {
            std::size_t half = approx.size() / 2;
            Vector a(half), d(half);
            for (std::size_t i = 0; i < half; ++i) {
                a[i] = (approx[2 * i] + approx[2 * i + 1]) * inv_sqrt2;
                d[i] = (approx[2 * i] - approx[2 * i + 1]) * inv_sqrt2;
            }
            details[static_cast<std::size_t>(lev)] = std::move(d);
            approx = std::move(a);
        }

        double sigma_hat = median_abs(details[0]) / 0.6745;
        double threshold = sigma_hat * std::sqrt(2.0 * std::log(static_cast<double>(n)));
        for (auto& d : details)
            for (double& c : d) c = soft_threshold(c, threshold);

        for (int lev = levels - 1; lev >= 0; --lev) {
            const Vector& d = details[static_cast<std::size_t>(lev)];
            Vector rec(approx.size() * 2);
            for (std::size_t i = 0; i < approx.size(); ++i) {
                rec[2 * i] = (approx[i] + d[i]) * inv_sqrt2;
                rec[2 * i + 1] = (approx[i] - d[i]) * inv_sqrt2;
            }
            approx = std::move(rec);
        }

        for (std::size_t i = 0; i < n; ++i) out.values(i, j) = approx[i];
    }
    return out;
}

} // namespace mpca
