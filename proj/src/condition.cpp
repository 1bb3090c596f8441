#include "mpca/condition.hpp"

#include "mpca/errors.hpp"
#include "mpca/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace mpca {

namespace {

Matrix rows_subset(const Matrix& values, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), values.cols());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < values.cols(); ++j) out(r, j) = values(idx[r], j);
    return out;
}

Vector mean_of_rows(const Matrix& values, const std::vector<std::size_t>& idx) {
    Vector mu(values.cols(), 0.0);
    for (std::size_t r : idx)
        for (std::size_t j = 0; j < values.cols(); ++j) mu[j] += values(r, j);
    for (double& v : mu) v /= static_cast<double>(idx.size());
    return mu;
}

double percentile(Vector v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double pos = p / 100.0 * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

PriorKey key_from_meta(const TimeSeriesDataset& data, std::size_t row, int units_idx,
                       int climate_idx, int occupancy_idx) {
    PriorKey key;
    key.units_running = data.meta_rows[row][static_cast<std::size_t>(units_idx)];
    if (key.units_running.empty())
        throw Error(ErrorKind::PriorKnowledge,
                    "sample " + std::to_string(row) + ": empty units_running tag");
    key.climate = climate_from_string(data.meta_rows[row][static_cast<std::size_t>(climate_idx)]);
    key.occupancy =
        occupancy_from_string(data.meta_rows[row][static_cast<std::size_t>(occupancy_idx)]);
    return key;
}

PriorKey majority_key(const std::vector<PriorKey>& keys) {
    std::map<PriorKey, std::size_t> counts;
    for (const auto& k : keys) ++counts[k];
    PriorKey best;
    std::size_t best_count = 0;
    for (const auto& [key, count] : counts) {
        if (count > best_count) { // map order gives the lexicographically smaller tie-winner
            best = key;
            best_count = count;
        }
    }
    return best;
}

} // namespace

PriorConditions derive_prior_conditions(const TimeSeriesDataset& data,
                                        std::size_t min_samples_per_condition) {
    data.validate();
    const std::size_t n = data.n_samples();
    const std::size_t m = data.n_variables();
    if (n == 0)
        throw Error(ErrorKind::EmptyDataset, "derive_prior_conditions: no samples");

    int units_idx = data.meta_index("units_running");
    int climate_idx = data.meta_index("climate");
    int occupancy_idx = data.meta_index("occupancy");
    if (units_idx < 0 || climate_idx < 0 || occupancy_idx < 0)
        throw Error(ErrorKind::PriorKnowledge,
                    "missing prior-knowledge tags (units_running, climate, occupancy)");

    std::size_t min_samples =
        min_samples_per_condition > 0 ? min_samples_per_condition : 10 * m;

    // label groups in order of first appearance
    std::vector<PriorKey> sample_keys(n);
    std::vector<PriorKey> group_keys;
    std::vector<std::vector<std::size_t>> groups;
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sample_keys[i] = key_from_meta(data, i, units_idx, climate_idx, occupancy_idx);
        int found = -1;
        for (std::size_t g = 0; g < group_keys.size(); ++g)
            if (group_keys[g] == sample_keys[i]) {
                found = static_cast<int>(g);
                break;
            }
        if (found < 0) {
            found = static_cast<int>(group_keys.size());
            group_keys.push_back(sample_keys[i]);
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(found)].push_back(i);
        labels[i] = found;
    }

    PriorConditions out;

    // merge undersized conditions into the nearest remaining one
    StandardizationParams global = fit_standardization(data.values);
    Matrix z = apply_standardization(data.values, global);
    while (groups.size() > 1) {
        int smallest = -1;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].size() >= min_samples) continue;
            if (smallest < 0 || groups[g].size() < groups[static_cast<std::size_t>(smallest)].size())
                smallest = static_cast<int>(g);
        }
        if (smallest < 0) break;

        std::vector<Vector> centroids(groups.size());
        for (std::size_t g = 0; g < groups.size(); ++g) centroids[g] = mean_of_rows(z, groups[g]);
        int nearest = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (static_cast<int>(g) == smallest) continue;
            double d = euclidean_distance(centroids[static_cast<std::size_t>(smallest)], centroids[g]);
            if (d < best) {
                best = d;
                nearest = static_cast<int>(g);
            }
        }
        out.warnings.push_back("condition with " +
                               std::to_string(groups[static_cast<std::size_t>(smallest)].size()) +
                               " samples (< " + std::to_string(min_samples) +
                               ") merged into its nearest neighbour");
        auto& dst = groups[static_cast<std::size_t>(nearest)];
        auto& src = groups[static_cast<std::size_t>(smallest)];
        dst.insert(dst.end(), src.begin(), src.end());
        std::sort(dst.begin(), dst.end());
        groups.erase(groups.begin() + smallest);
        group_keys.erase(group_keys.begin() + smallest);
    }

    out.k = static_cast<int>(groups.size());
    out.labels.assign(n, 0);
    out.keys.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<PriorKey> member_keys;
        member_keys.reserve(groups[g].size());
        for (std::size_t i : groups[g]) {
            out.labels[i] = static_cast<int>(g) + 1;
            member_keys.push_back(sample_keys[i]);
        }
        out.keys[g] = majority_key(member_keys);
    }
    return out;
}

ConditionAssignment kmeans_refine(const Matrix& standardized,
                                  const std::vector<int>& initial_labels, int k,
                                  int max_iter, double match_slack) {
    const std::size_t n = standardized.rows();
    const std::size_t m = standardized.cols();
    if (k < 1)
        throw Error(ErrorKind::InvalidParameter, "kmeans_refine: k must be >= 1");
    if (initial_labels.size() != n)
        throw Error(ErrorKind::InvalidParameter, "kmeans_refine: label count mismatch");

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        int lab = initial_labels[i];
        if (lab < 1 || lab > k)
            throw Error(ErrorKind::InvalidParameter, "kmeans_refine: label out of range");
        members[static_cast<std::size_t>(lab - 1)].push_back(i);
    }
    for (int c = 0; c < k; ++c)
        if (members[static_cast<std::size_t>(c)].empty())
            throw Error(ErrorKind::InvalidParameter,
                        "kmeans_refine: initial condition " + std::to_string(c + 1) + " is empty");

    ConditionAssignment out;
    out.k = k;
    out.labels = initial_labels;
    out.centroids = Matrix(static_cast<std::size_t>(k), m);
    for (int c = 0; c < k; ++c) {
        Vector mu = mean_of_rows(standardized, members[static_cast<std::size_t>(c)]);
        for (std::size_t j = 0; j < m; ++j) out.centroids(static_cast<std::size_t>(c), j) = mu[j];
    }

    std::vector<int> labels = initial_labels;
    for (int iter = 0; iter < max_iter; ++iter) {
        // assignment step (ties to the lowest condition id)
        std::vector<int> next(n);
        double wss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = euclidean_distance(standardized.row(i),
                                              out.centroids.row(static_cast<std::size_t>(c)));
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            next[i] = best_c + 1;
            wss += best_d * best_d;
        }
        out.wss_history.push_back(wss);
        out.iterations = static_cast<std::size_t>(iter + 1);
        bool changed = next != labels;
        labels = std::move(next);
        if (!changed) break;

        // update step
        std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i)
            groups[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
        for (int c = 0; c < k; ++c) {
            auto& g = groups[static_cast<std::size_t>(c)];
            if (!g.empty()) {
                Vector mu = mean_of_rows(standardized, g);
                for (std::size_t j = 0; j < m; ++j)
                    out.centroids(static_cast<std::size_t>(c), j) = mu[j];
            } else {
                // deterministic re-seed: farthest point from its assigned centroid
                std::size_t far_i = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = euclidean_distance(
                        standardized.row(i),
                        out.centroids.row(static_cast<std::size_t>(labels[i] - 1)));
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                for (std::size_t j = 0; j < m; ++j)
                    out.centroids(static_cast<std::size_t>(c), j) = standardized(far_i, j);
            }
        }
    }
    out.labels = std::move(labels);

    out.max_match_distance.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        Vector dists;
        for (std::size_t i = 0; i < n; ++i)
            if (out.labels[i] == c + 1)
                dists.push_back(euclidean_distance(
                    standardized.row(i), out.centroids.row(static_cast<std::size_t>(c))));
        out.max_match_distance[static_cast<std::size_t>(c)] =
            percentile(std::move(dists), 99.0) * match_slack;
    }
    return out;
}

const PcaSubmodel& ModelBank::submodel_by_id(int condition_id) const {
    for (const auto& s : submodels)
        if (s.condition_id == condition_id) return s;
    throw Error(ErrorKind::SchemaMismatch,
                "bank has no condition " + std::to_string(condition_id));
}

void ModelBank::validate() const {
    if (format_version != kFormatVersion)
        throw Error(ErrorKind::UnsupportedVersion,
                    "bank format_version " + std::to_string(format_version) + " unsupported");
    config.validate();
    if (submodels.empty())
        throw Error(ErrorKind::InvalidData, "bank: no submodels");
    const std::size_t m = n_variables();
    if (global_standardization.size() != m)
        throw Error(ErrorKind::InvalidData, "bank: global standardization length mismatch");
    std::vector<int> ids;
    for (const auto& s : submodels) {
        if (s.n_variables() != m)
            throw Error(ErrorKind::InvalidData, "bank: submodel variable count mismatch");
        s.validate();
        ids.push_back(s.condition_id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw Error(ErrorKind::InvalidData, "bank: duplicate condition ids");
}

ModelBank fit_bank(const TimeSeriesDataset& data, const ConditionAssignment& assignment,
                   const GlobalConfig& config) {
    config.validate();
    data.validate();
    const std::size_t n = data.n_samples();
    const std::size_t m = data.n_variables();
    if (assignment.labels.size() != n)
        throw Error(ErrorKind::InvalidParameter, "fit_bank: assignment does not match data");

    ModelBank bank;
    bank.config = config;
    bank.variable_names = data.variable_names;
    bank.global_standardization = fit_standardization(data.values);

    bool has_tags = data.meta_index("units_running") >= 0 && data.meta_index("climate") >= 0 &&
                    data.meta_index("occupancy") >= 0;
    int units_idx = data.meta_index("units_running");
    int climate_idx = data.meta_index("climate");
    int occupancy_idx = data.meta_index("occupancy");

    for (int c = 1; c <= assignment.k; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (assignment.labels[i] == c) idx.push_back(i);
        if (idx.size() <= m)
            throw Error(ErrorKind::InsufficientSamples,
                        "condition " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                            " samples; need more than " + std::to_string(m));

        Matrix raw = rows_subset(data.values, idx);
        PcaSubmodel model = fit_submodel_core(raw, config.alpha, config.cpv_target,
                                              config.t2_limit_variant, config.spe_h0_variant);
        model.condition_id = c;
        model.centroid = assignment.centroids.row(static_cast<std::size_t>(c - 1));
        model.max_match_distance = assignment.max_match_distance[static_cast<std::size_t>(c - 1)];
        if (has_tags) {
            std::vector<PriorKey> keys;
            keys.reserve(idx.size());
            for (std::size_t i : idx)
                keys.push_back(key_from_meta(data, i, units_idx, climate_idx, occupancy_idx));
            model.prior_key = majority_key(keys);
        } else {
            model.prior_key = PriorKey{"unspecified", Climate::monsoon_alternating,
                                       Occupancy::working_time};
        }
        bank.submodels.push_back(std::move(model));
    }

    bank.validate();
    return bank;
}

std::optional<int> match_condition(const Vector& x_raw, const ModelBank& bank) {
    Vector z = apply_standardization(x_raw, bank.global_standardization);
    const PcaSubmodel* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& s : bank.submodels) {
        double d = euclidean_distance(z, s.centroid);
        if (d < best_d || (d == best_d && best && s.condition_id < best->condition_id)) {
            best_d = d;
            best = &s;
        }
    }
    if (!best || best_d > best->max_match_distance) return std::nullopt;
    return best->condition_id;
}

} // namespace mpca
