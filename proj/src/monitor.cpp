#include "mpca/monitor.hpp"

#include "mpca/errors.hpp"
#include "mpca/preprocess.hpp"

#include <string>

namespace mpca {

std::string alarm_to_string(Alarm a) {
    switch (a) {
        case Alarm::normal: return "normal";
        case Alarm::fault: return "fault";
        case Alarm::unmatched: return "unmatched";
    }
    return "normal";
}

Alarm alarm_from_string(const std::string& s) {
    if (s == "normal") return Alarm::normal;
    if (s == "fault") return Alarm::fault;
    if (s == "unmatched") return Alarm::unmatched;
    throw Error(ErrorKind::Format, "unknown alarm state '" + s + "'");
}

std::vector<MonitorRecord> monitor_stream(const TimeSeriesDataset& data, const ModelBank& bank) {
    data.validate();
    bank.validate();
    if (data.variable_names != bank.variable_names)
        throw Error(ErrorKind::SchemaMismatch,
                    "monitor_stream: dataset variables do not match the bank");

    std::vector<MonitorRecord> records;
    records.reserve(data.n_samples());
    for (std::size_t i = 0; i < data.n_samples(); ++i) {
        MonitorRecord rec;
        rec.sample_index = i;
        rec.timestamp = data.timestamps[i];

        Vector x_raw = data.values.row(i);
        std::optional<int> cond = match_condition(x_raw, bank);
        if (!cond) {
            rec.alarm = Alarm::unmatched;
            records.push_back(std::move(rec));
            continue;
        }
        const PcaSubmodel& model = bank.submodel_by_id(*cond);
        Vector z = apply_standardization(x_raw, model.standardization);
        rec.condition_id = cond;
        rec.indices = compute_indices(z, model);
        rec.limits = IndexTriple{model.t2_limit, model.spe_limit, model.phi_limit};
        rec.alarm = rec.indices->phi > model.phi_limit ? Alarm::fault : Alarm::normal;
        records.push_back(std::move(rec));
    }
    return records;
}

DetectionReport detection_metrics(const std::vector<MonitorRecord>& records,
                                  std::size_t fault_start_index, std::size_t run_length_r) {
    if (records.empty())
        throw Error(ErrorKind::EmptyDataset, "detection_metrics: no records");
    if (run_length_r < 1)
        throw Error(ErrorKind::InvalidParameter, "detection_metrics: run length must be >= 1");

    DetectionReport rep;
    std::size_t run = 0;
    std::optional<std::size_t> run_start;
    for (const auto& rec : records) {
        if (rec.sample_index < fault_start_index) continue;
        ++rep.n_test;
        if (rec.condition_id) {
            ++rep.n_matched;
            ++rep.per_condition_counts[std::to_string(*rec.condition_id)];
        } else {
            ++rep.per_condition_counts["none"];
        }
        if (rec.alarm == Alarm::fault) {
            ++rep.n_alarms;
            if (!rep.first_exceed_index) rep.first_exceed_index = rec.sample_index;
            if (run == 0) run_start = rec.sample_index;
            ++run;
            if (run >= run_length_r && !rep.first_sustained_index)
                rep.first_sustained_index = run_start;
        } else {
            run = 0;
            run_start.reset();
        }
    }
    if (rep.n_matched > 0)
        rep.detection_rate = static_cast<double>(rep.n_alarms) / static_cast<double>(rep.n_matched);
    if (rep.n_test > 0)
        rep.detection_rate_total =
            static_cast<double>(rep.n_alarms) / static_cast<double>(rep.n_test);
    return rep;
}

} // namespace mpca
