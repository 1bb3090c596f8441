#include "mpca/config.hpp"

#include "mpca/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace mpca {

void GlobalConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorKind::InvalidParameter, "config: alpha must be in (0,1)");
    if (!(cpv_target > 0.0 && cpv_target <= 1.0))
        throw Error(ErrorKind::InvalidParameter, "config: cpv_target must be in (0,1]");
    if (denoise_levels < 0)
        throw Error(ErrorKind::InvalidParameter, "config: denoise_levels must be >= 0");
    if (run_length_r < 1)
        throw Error(ErrorKind::InvalidParameter, "config: run_length_r must be >= 1");
    if (!(match_slack > 0.0))
        throw Error(ErrorKind::InvalidParameter, "config: match_slack must be positive");
    if (min_samples_per_condition < 0)
        throw Error(ErrorKind::InvalidParameter, "config: min_samples_per_condition must be >= 0");
}

std::string limit_variant_to_string(LimitVariant v) {
    return v == LimitVariant::standard ? "standard" : "paper_printed";
}

LimitVariant limit_variant_from_string(const std::string& s) {
    if (s == "standard") return LimitVariant::standard;
    if (s == "paper_printed") return LimitVariant::paper_printed;
    throw Error(ErrorKind::Format, "unknown limit variant '" + s + "'");
}

std::string climate_to_string(Climate c) {
    switch (c) {
        case Climate::rainy: return "rainy";
        case Climate::dry: return "dry";
        case Climate::monsoon_alternating: return "monsoon_alternating";
    }
    return "monsoon_alternating";
}

Climate climate_from_string(const std::string& s) {
    if (s == "rainy") return Climate::rainy;
    if (s == "dry") return Climate::dry;
    if (s == "monsoon_alternating") return Climate::monsoon_alternating;
    throw Error(ErrorKind::PriorKnowledge, "unknown climate '" + s + "'");
}

std::string occupancy_to_string(Occupancy o) {
    return o == Occupancy::working_time ? "working_time" : "rest_time";
}

Occupancy occupancy_from_string(const std::string& s) {
    if (s == "working_time") return Occupancy::working_time;
    if (s == "rest_time") return Occupancy::rest_time;
    throw Error(ErrorKind::PriorKnowledge, "unknown occupancy '" + s + "'");
}

void to_json(nlohmann::json& j, const GlobalConfig& c) {
    j = nlohmann::json{
        {"alpha", c.alpha},
        {"cpv_target", c.cpv_target},
        {"t2_limit_variant", limit_variant_to_string(c.t2_limit_variant)},
        {"spe_h0_variant", limit_variant_to_string(c.spe_h0_variant)},
        {"chauvenet", c.chauvenet},
        {"transient_k", c.transient_k},
        {"denoise_levels", c.denoise_levels},
        {"run_length_r", c.run_length_r},
        {"match_slack", c.match_slack},
        {"min_samples_per_condition", c.min_samples_per_condition},
    };
}

void from_json(const nlohmann::json& j, GlobalConfig& c) {
    c = GlobalConfig{};
    c.alpha = j.value("alpha", c.alpha);
    c.cpv_target = j.value("cpv_target", c.cpv_target);
    if (j.contains("t2_limit_variant"))
        c.t2_limit_variant = limit_variant_from_string(j.at("t2_limit_variant").get<std::string>());
    if (j.contains("spe_h0_variant"))
        c.spe_h0_variant = limit_variant_from_string(j.at("spe_h0_variant").get<std::string>());
    c.chauvenet = j.value("chauvenet", c.chauvenet);
    c.transient_k = j.value("transient_k", c.transient_k);
    c.denoise_levels = j.value("denoise_levels", c.denoise_levels);
    c.run_length_r = j.value("run_length_r", c.run_length_r);
    c.match_slack = j.value("match_slack", c.match_slack);
    c.min_samples_per_condition = j.value("min_samples_per_condition", c.min_samples_per_condition);
    c.validate();
}

GlobalConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, "config '" + path + "': " + e.what());
    }
    try {
        return j.get<GlobalConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, "config '" + path + "': " + e.what());
    }
}

} // namespace mpca
