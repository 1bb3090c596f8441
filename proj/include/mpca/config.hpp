#pragma once

#include "mpca/pca.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace mpca {

/// Pipeline-wide knobs. The defaults are the documented choices for every
/// parameter the method leaves open (confidence level, retained-variance
/// target, cleaning thresholds, matching slack).
struct GlobalConfig {
    double alpha = 0.99;
    double cpv_target = 0.85;
    LimitVariant t2_limit_variant = LimitVariant::standard;
    LimitVariant spe_h0_variant = LimitVariant::standard;
    bool chauvenet = true;
    double transient_k = 3.0;
    int denoise_levels = 0; // 0 = off
    int run_length_r = 10;
    double match_slack = 1.5;
    int min_samples_per_condition = 0; // 0 = automatic (10 * m)

    std::size_t effective_min_samples(std::size_t m) const {
        return min_samples_per_condition > 0
                   ? static_cast<std::size_t>(min_samples_per_condition)
                   : 10 * m;
    }

    void validate() const;
};

std::string limit_variant_to_string(LimitVariant v);
LimitVariant limit_variant_from_string(const std::string& s);

void to_json(nlohmann::json& j, const GlobalConfig& c);
void from_json(const nlohmann::json& j, GlobalConfig& c);

GlobalConfig load_config(const std::string& path);

} // namespace mpca
