#pragma once

#include "mpca/config.hpp"
#include "mpca/dataset.hpp"
#include "mpca/pca.hpp"
#include "mpca/prior_key.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mpca {

/// Condition structure read off the prior-knowledge meta tags. Conditions
/// with too few members are merged into their nearest neighbour, so K here
/// is the count after merging.
struct PriorConditions {
    int k = 0;
    std::vector<int> labels; // per sample, 1..k
    std::vector<PriorKey> keys; // per condition (majority tuple of members)
    std::vector<std::string> warnings;
};

PriorConditions derive_prior_conditions(const TimeSeriesDataset& data,
                                        std::size_t min_samples_per_condition = 0);

struct ConditionAssignment {
    int k = 0;
    std::vector<int> labels; // per sample, 1..k
    Matrix centroids;        // k x m, globally standardized space
    Vector max_match_distance; // per condition
    std::vector<double> wss_history; // within-cluster sum of squares per iteration
    std::size_t iterations = 0;
};

/// Lloyd refinement seeded with the per-prior-label centroids. Deterministic:
/// ties go to the lowest condition id and an emptied cluster is re-seeded
/// with the globally farthest point from its assigned centroid.
ConditionAssignment kmeans_refine(const Matrix& standardized,
                                  const std::vector<int>& initial_labels, int k,
                                  int max_iter = 100, double match_slack = 1.5);

/// Versioned collection of per-condition submodels plus the global
/// standardization used for condition matching.
struct ModelBank {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    GlobalConfig config;
    std::vector<std::string> variable_names;
    StandardizationParams global_standardization;
    std::vector<PcaSubmodel> submodels;

    std::size_t n_variables() const { return variable_names.size(); }
    const PcaSubmodel& submodel_by_id(int condition_id) const;
    void validate() const;
};

/// Fit one submodel per assigned condition on the condition's raw member
/// rows. Prior keys are taken as the majority tuple of each condition's
/// members (a placeholder key is used when the data carries no tags).
ModelBank fit_bank(const TimeSeriesDataset& data, const ConditionAssignment& assignment,
                   const GlobalConfig& config);

/// Nearest-centroid match in globally standardized space, gated by the
/// winning condition's max_match_distance. Ties break to the lowest id.
std::optional<int> match_condition(const Vector& x_raw, const ModelBank& bank);

} // namespace mpca
