#pragma once

#include "mpca/condition.hpp"
#include "mpca/config.hpp"
#include "mpca/dataset.hpp"
#include "mpca/preprocess.hpp"

namespace mpca {

struct TrainResult {
    ModelBank bank;
    TimeSeriesDataset cleaned; // training data after the cleaning steps
    CleaningReport chauvenet_report;
    CleaningReport transient_report;
    PriorConditions priors;
    ConditionAssignment assignment;
};

/// Full offline modeling pass: clean, derive conditions from prior tags,
/// refine with k-means, fit one submodel per condition. k_override = 1
/// collapses everything into a single global model (the baseline); 0 uses
/// the prior-knowledge condition count.
TrainResult train_bank(const TimeSeriesDataset& raw, const GlobalConfig& config,
                       int k_override = 0);

} // namespace mpca
