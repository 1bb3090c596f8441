#pragma once

#include "mpca/dataset.hpp"
#include "mpca/faultlab.hpp"

#include <string>
#include <vector>

namespace testutil {

inline mpca::TimeSeriesDataset make_dataset(const std::vector<mpca::Vector>& rows,
                                            std::vector<std::string> names = {}) {
    mpca::TimeSeriesDataset data;
    std::size_t m = rows.empty() ? 0 : rows[0].size();
    if (names.empty())
        for (std::size_t j = 0; j < m; ++j) names.push_back("v" + std::to_string(j));
    data.variable_names = std::move(names);
    data.values = mpca::Matrix(rows.size(), m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.timestamps.push_back(static_cast<std::int64_t>(i) * 60);
        for (std::size_t j = 0; j < m; ++j) data.values(i, j) = rows[i][j];
    }
    data.meta_rows.assign(rows.size(), {});
    return data;
}

/// Two well-separated factor-model conditions; enough texture to exercise
/// the full pipeline without the shipped replica config.
inline mpca::SynthPlantConfig small_two_mode_config() {
    using namespace mpca;
    SynthPlantConfig cfg;
    cfg.variable_names = {"a", "b", "c", "d"};
    cfg.transition_length = 0;
    cfg.seed = 5;

    Matrix w(4, 2);
    double rows[4][2] = {{0.9, 0.2}, {0.7, -0.4}, {0.3, 0.8}, {0.5, 0.6}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) w(i, j) = rows[i][j];

    PlantMode m1;
    m1.prior_key = PriorKey{"2 chillers,5 pumps", Climate::monsoon_alternating,
                            Occupancy::working_time};
    m1.mean = {10.0, 20.0, 30.0, 40.0};
    m1.factor_loadings = w;
    m1.factor_std = 1.0;
    m1.noise_std = 0.2;
    m1.duration = 400;

    PlantMode m2 = m1;
    m2.prior_key = PriorKey{"1 chillers,2 pumps", Climate::monsoon_alternating,
                            Occupancy::rest_time};
    m2.mean = {10.0, 28.0, 38.0, 48.0};
    cfg.modes = {m1, m2};
    return cfg;
}

} // namespace testutil
