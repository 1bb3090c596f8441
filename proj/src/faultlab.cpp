#include "mpca/faultlab.hpp"

#include "mpca/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>

namespace mpca {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw Error(ErrorKind::Format, "fault spec: bad " + what + " '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s, const std::string& what) {
    std::size_t v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::Format, "fault spec: bad " + what + " '" + s + "'");
    return v;
}

} // namespace

double GaussianSampler::next() {
    // 53-bit uniforms; u1 in (0,1], u2 in [0,1)
    double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

FaultSpec FaultSpec::parse(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorKind::Format, "fault spec: expected '<kind>:...' in '" + text + "'");
    std::string kind = text.substr(0, colon);

    FaultSpec spec;
    if (kind == "bias") spec.kind = FaultKind::bias;
    else if (kind == "drift") spec.kind = FaultKind::drift;
    else throw Error(ErrorKind::Format, "fault spec: unknown kind '" + kind + "'");

    bool have_var = false, have_mag = false, have_start = false, have_ramp = false;
    for (const std::string& part : split(text.substr(colon + 1), ',')) {
        std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Format, "fault spec: expected key=value, got '" + part + "'");
        std::string key = part.substr(0, eq);
        std::string value = part.substr(eq + 1);
        if (key == "var") {
            spec.variable = value;
            have_var = !value.empty();
        } else if (key == "mag") {
            spec.magnitude = parse_real(value, "magnitude");
            have_mag = true;
        } else if (key == "start") {
            spec.start_index = parse_index(value, "start index");
            have_start = true;
        } else if (key == "ramp") {
            spec.ramp_length = parse_index(value, "ramp length");
            have_ramp = true;
        } else {
            throw Error(ErrorKind::Format, "fault spec: unknown key '" + key + "'");
        }
    }
    if (!have_var || !have_mag || !have_start)
        throw Error(ErrorKind::Format, "fault spec: var, mag and start are required");
    if (spec.kind == FaultKind::drift && !have_ramp)
        throw Error(ErrorKind::Format, "fault spec: drift needs ramp=<int>");
    return spec;
}

TimeSeriesDataset inject_fault(const TimeSeriesDataset& data, const FaultSpec& spec) {
    data.validate();
    if (spec.magnitude == 0.0)
        throw Error(ErrorKind::InvalidParameter, "inject_fault: magnitude must be nonzero");
    int var = data.variable_index(spec.variable);
    if (var < 0)
        throw Error(ErrorKind::SchemaMismatch,
                    "inject_fault: unknown variable '" + spec.variable + "'");
    if (spec.start_index >= data.n_samples())
        throw Error(ErrorKind::InvalidParameter, "inject_fault: start index beyond data");
    if (spec.kind == FaultKind::drift && spec.ramp_length < 1)
        throw Error(ErrorKind::InvalidParameter, "inject_fault: ramp length must be >= 1");

    TimeSeriesDataset out = data;
    for (std::size_t t = spec.start_index; t < out.n_samples(); ++t) {
        double offset = spec.magnitude;
        if (spec.kind == FaultKind::drift) {
            double progress = static_cast<double>(t - spec.start_index) /
                              static_cast<double>(spec.ramp_length);
            offset = spec.magnitude * std::min(1.0, progress);
        }
        out.values(t, static_cast<std::size_t>(var)) += offset;
    }
    return out;
}

double PlantMode::variable_std(std::size_t j) const {
    double factor_var = 0.0;
    for (std::size_t q = 0; q < factor_loadings.cols(); ++q)
        factor_var += factor_loadings(j, q) * factor_loadings(j, q);
    return std::sqrt(factor_var * factor_std * factor_std + noise_std * noise_std);
}

void SynthPlantConfig::validate() const {
    if (variable_names.empty())
        throw Error(ErrorKind::InvalidParameter, "plant config: no variables");
    if (modes.empty())
        throw Error(ErrorKind::InvalidParameter, "plant config: no modes");
    if (cadence_seconds < 1)
        throw Error(ErrorKind::InvalidParameter, "plant config: cadence must be >= 1s");
    const std::size_t m = variable_names.size();
    for (const auto& mode : modes) {
        if (mode.mean.size() != m)
            throw Error(ErrorKind::InvalidParameter, "plant config: mode mean length mismatch");
        if (mode.factor_loadings.rows() != m || mode.factor_loadings.cols() < 1)
            throw Error(ErrorKind::InvalidParameter, "plant config: loading shape mismatch");
        if (!(mode.factor_std > 0.0) || !(mode.noise_std > 0.0))
            throw Error(ErrorKind::InvalidParameter, "plant config: stds must be positive");
        if (mode.duration < 1)
            throw Error(ErrorKind::InvalidParameter, "plant config: mode duration must be >= 1");
    }
}

SynthPlantConfig load_plant_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open plant config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, "plant config '" + path + "': " + e.what());
    }

    SynthPlantConfig cfg;
    try {
        cfg.variable_names = j.at("variables").get<std::vector<std::string>>();
        cfg.transition_length = j.value("transition_length", std::size_t{0});
        cfg.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("start_timestamp"))
            cfg.start_timestamp = parse_iso8601(j.at("start_timestamp").get<std::string>());
        cfg.cadence_seconds = j.value("cadence_seconds", std::int64_t{60});
        for (const auto& jm : j.at("modes")) {
            PlantMode mode;
            const auto& jk = jm.at("prior_key");
            mode.prior_key.units_running = jk.at("units_running").get<std::string>();
            mode.prior_key.climate = climate_from_string(jk.at("climate").get<std::string>());
            mode.prior_key.occupancy =
                occupancy_from_string(jk.at("occupancy").get<std::string>());
            mode.mean = jm.at("mean").get<Vector>();
            auto rows = jm.at("loadings").get<std::vector<Vector>>();
            std::size_t q = rows.empty() ? 0 : rows[0].size();
            mode.factor_loadings = Matrix(rows.size(), q);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != q)
                    throw Error(ErrorKind::Format, "plant config: ragged loadings");
                for (std::size_t c = 0; c < q; ++c) mode.factor_loadings(r, c) = rows[r][c];
            }
            mode.factor_std = jm.at("factor_std").get<double>();
            mode.noise_std = jm.at("noise_std").get<double>();
            mode.duration = jm.at("duration").get<std::size_t>();
            cfg.modes.push_back(std::move(mode));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, "plant config '" + path + "': " + e.what());
    }
    cfg.validate();
    return cfg;
}

TimeSeriesDataset generate_plant(const SynthPlantConfig& config) {
    return generate_plant(config, config.seed);
}

TimeSeriesDataset generate_plant(const SynthPlantConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t m = config.variable_names.size();

    TimeSeriesDataset data;
    data.variable_names = config.variable_names;
    data.meta_names = {"units_running", "climate", "occupancy", "transient"};

    std::size_t total = 0;
    for (const auto& mode : config.modes) total += mode.duration;
    if (config.modes.size() > 1) total += config.transition_length * (config.modes.size() - 1);

    data.values = Matrix(total, m);
    data.timestamps.reserve(total);
    data.meta_rows.reserve(total);

    GaussianSampler g(seed);
    std::size_t row = 0;
    auto emit = [&](const Vector& x, const PriorKey& key, bool transient) {
        for (std::size_t j = 0; j < m; ++j) data.values(row, j) = x[j];
        data.timestamps.push_back(config.start_timestamp +
                                  static_cast<std::int64_t>(row) * config.cadence_seconds);
        data.meta_rows.push_back({key.units_running, climate_to_string(key.climate),
                                  occupancy_to_string(key.occupancy), transient ? "1" : "0"});
        ++row;
    };

    auto sample_mode = [&](const PlantMode& mode) {
        Vector x = mode.mean;
        std::size_t q = mode.factor_loadings.cols();
        Vector f(q);
        for (std::size_t i = 0; i < q; ++i) f[i] = g.next() * mode.factor_std;
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < q; ++i) v += mode.factor_loadings(j, i) * f[i];
            x[j] += v + g.next() * mode.noise_std;
        }
        return x;
    };

    for (std::size_t k = 0; k < config.modes.size(); ++k) {
        const PlantMode& mode = config.modes[k];
        for (std::size_t t = 0; t < mode.duration; ++t)
            emit(sample_mode(mode), mode.prior_key, false);

        if (k + 1 < config.modes.size() && config.transition_length > 0) {
            const PlantMode& next = config.modes[k + 1];
            for (std::size_t s = 1; s <= config.transition_length; ++s) {
                double u = static_cast<double>(s) /
                           static_cast<double>(config.transition_length + 1);
                Vector x(m);
                for (std::size_t j = 0; j < m; ++j) {
                    x[j] = (1.0 - u) * mode.mean[j] + u * next.mean[j] +
                           g.next() * next.noise_std;
                }
                emit(x, next.prior_key, true);
            }
        }
    }
    data.validate();
    return data;
}

} // namespace mpca
