#pragma once

#include "mpca/dataset.hpp"
#include "mpca/prior_key.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mpca {

enum class FaultKind { bias, drift };

/// Additive sensor fault: a constant offset (bias) or an offset ramping
/// linearly from zero to `magnitude` over `ramp_length` samples (drift).
struct FaultSpec {
    FaultKind kind = FaultKind::bias;
    std::string variable;
    double magnitude = 0.0; // engineering units, nonzero
    std::size_t start_index = 0;
    std::size_t ramp_length = 1; // drift only

    /// Parse the CLI syntax
    ///   bias:var=<name>,mag=<real>,start=<int>
    ///   drift:var=<name>,mag=<real>,start=<int>,ramp=<int>
    static FaultSpec parse(const std::string& text);
};

TimeSeriesDataset inject_fault(const TimeSeriesDataset& data, const FaultSpec& spec);

struct PlantMode {
    PriorKey prior_key;
    Vector mean;            // length m
    Matrix factor_loadings; // m x q
    double factor_std = 1.0;
    double noise_std = 1.0;
    std::size_t duration = 0;

    /// Marginal std of one variable under this mode's factor model.
    double variable_std(std::size_t j) const;
};

/// Synthetic multi-condition plant: per mode x = mean + W f + eps with
/// f ~ N(0, factor_std^2 I) and eps ~ N(0, noise_std^2 I), concatenated in
/// order with linear mean interpolation over transition_length samples.
struct SynthPlantConfig {
    std::vector<std::string> variable_names;
    std::vector<PlantMode> modes;
    std::size_t transition_length = 0;
    std::uint64_t seed = 1;
    std::int64_t start_timestamp = 1609459200; // 2021-01-01T00:00:00Z
    std::int64_t cadence_seconds = 60;

    void validate() const;
};

SynthPlantConfig load_plant_config(const std::string& path);

TimeSeriesDataset generate_plant(const SynthPlantConfig& config);
TimeSeriesDataset generate_plant(const SynthPlantConfig& config, std::uint64_t seed);

/// Deterministic normal sampler (explicit Box-Muller over mt19937_64 bits,
/// so output is identical across platforms for a fixed seed).
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double next();

private:
    std::mt19937_64 rng_;
};

} // namespace mpca
