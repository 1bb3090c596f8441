#include "mpca/pipeline.hpp"

#include "mpca/errors.hpp"

namespace mpca {

TrainResult train_bank(const TimeSeriesDataset& raw, const GlobalConfig& config,
                       int k_override) {
    config.validate();
    raw.validate();
    if (k_override != 0 && k_override != 1)
        throw Error(ErrorKind::InvalidParameter, "train_bank: k_override must be 0 or 1");

    TrainResult result;
    result.cleaned = raw;

    if (config.chauvenet) {
        auto [filtered, report] = chauvenet_filter(result.cleaned);
        result.cleaned = std::move(filtered);
        result.chauvenet_report = report;
    }
    if (config.transient_k > 0.0) {
        auto [filtered, report] = transient_filter(result.cleaned, config.transient_k);
        result.cleaned = std::move(filtered);
        result.transient_report = report;
    }
    if (config.denoise_levels > 0)
        result.cleaned = wavelet_denoise(result.cleaned, config.denoise_levels);

    const std::size_t n = result.cleaned.n_samples();
    const std::size_t m = result.cleaned.n_variables();
    if (k_override == 1) {
        result.priors.k = 1;
        result.priors.labels.assign(n, 1);
        result.priors.keys.resize(1);
    } else {
        result.priors =
            derive_prior_conditions(result.cleaned, config.effective_min_samples(m));
    }

    StandardizationParams global = fit_standardization(result.cleaned.values);
    Matrix z = apply_standardization(result.cleaned.values, global);
    result.assignment =
        kmeans_refine(z, result.priors.labels, result.priors.k, 100, config.match_slack);

    result.bank = fit_bank(result.cleaned, result.assignment, config);
    return result;
}

} // namespace mpca
