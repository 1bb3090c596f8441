#include "mpca/bank_io.hpp"
#include "mpca/condition.hpp"
#include "mpca/config.hpp"
#include "mpca/dataset.hpp"
#include "mpca/errors.hpp"
#include "mpca/faultlab.hpp"
#include "mpca/monitor.hpp"
#include "mpca/pipeline.hpp"
#include "mpca/trace.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using mpca::GlobalConfig;

struct TrainFlags {
    std::string data_path;
    std::string bank_out;
    std::string config_path;
    double alpha = 0.99;
    double cpv = 0.85;
    std::string chauvenet = "on";
    double transient_k = 3.0;
    int denoise = 0;
    int run_length = 10;
    double match_slack = 1.5;
    int min_samples = 0;
    std::string t2_variant = "standard";
    std::string spe_variant = "standard";
    int k_override = 0;
};

void print_bank_summary(const mpca::ModelBank& bank) {
    std::printf("%-10s %8s %3s %12s %12s %12s\n", "condition", "n_train", "l", "t2_limit",
                "spe_limit", "phi_limit");
    for (const auto& s : bank.submodels) {
        std::printf("%-10d %8zu %3zu %12.4f %12.4f %12.4f\n", s.condition_id, s.n_train, s.l,
                    s.t2_limit, s.spe_limit, s.phi_limit);
    }
}

std::string trace_csv_path(const std::string& svg_path) {
    if (svg_path.size() > 4 && svg_path.substr(svg_path.size() - 4) == ".svg")
        return svg_path.substr(0, svg_path.size() - 4) + ".csv";
    return svg_path + ".csv";
}

nlohmann::json report_to_json(const mpca::DetectionReport& rep) {
    nlohmann::json j{
        {"n_test", rep.n_test},
        {"n_matched", rep.n_matched},
        {"n_alarms", rep.n_alarms},
        {"detection_rate", rep.detection_rate},
        {"detection_rate_total", rep.detection_rate_total},
        {"per_condition_counts", rep.per_condition_counts},
    };
    j["first_exceed_index"] =
        rep.first_exceed_index ? nlohmann::json(*rep.first_exceed_index) : nlohmann::json();
    j["first_sustained_index"] =
        rep.first_sustained_index ? nlohmann::json(*rep.first_sustained_index) : nlohmann::json();
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-condition PCA fault detection toolchain"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic plant data from a config");
    std::string synth_config, synth_out;
    std::uint64_t synth_seed = 0;
    synth->add_option("--config", synth_config, "plant config JSON")->required();
    synth->add_option("--out", synth_out, "output CSV path")->required();
    auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "RNG seed (default: config)");

    // inject
    auto* inject = app.add_subcommand("inject", "Inject a sensor fault into a CSV");
    std::string inject_in, inject_out, inject_fault_text;
    bool inject_percent = false;
    inject->add_option("--in", inject_in, "input CSV")->required();
    inject->add_option("--out", inject_out, "output CSV")->required();
    inject
        ->add_option("--fault", inject_fault_text,
                     "bias:var=<name>,mag=<real>,start=<int> or "
                     "drift:var=<name>,mag=<real>,start=<int>,ramp=<int>")
        ->required();
    inject->add_flag("--percent-of-mean", inject_percent,
                     "interpret mag as percent of the variable's mean");

    // train
    auto* train = app.add_subcommand("train", "Fit a model bank from training data");
    TrainFlags tf;
    train->add_option("--data", tf.data_path, "training CSV")->required();
    train->add_option("--bank-out", tf.bank_out, "output bank JSON")->required();
    train->add_option("--config", tf.config_path, "config JSON (flags override it)");
    auto* opt_alpha = train->add_option("--alpha", tf.alpha, "confidence level");
    auto* opt_cpv = train->add_option("--cpv", tf.cpv, "cumulative variance target");
    auto* opt_chauv = train->add_option("--chauvenet", tf.chauvenet, "on|off");
    auto* opt_tk = train->add_option("--transient-k", tf.transient_k, "step threshold in sigma (<=0 disables)");
    auto* opt_den = train->add_option("--denoise", tf.denoise, "wavelet levels (0 = off)");
    auto* opt_r = train->add_option("--run-length", tf.run_length, "sustained-alarm run length");
    auto* opt_slack = train->add_option("--match-slack", tf.match_slack, "match radius slack factor");
    auto* opt_min = train->add_option("--min-samples-per-condition", tf.min_samples,
                                      "merge threshold (0 = 10*m)");
    auto* opt_t2v = train->add_option("--t2-variant", tf.t2_variant, "standard|paper_printed");
    auto* opt_spev = train->add_option("--spe-variant", tf.spe_variant, "standard|paper_printed");
    train->add_option("--k-override", tf.k_override, "1 = single global model baseline");

    // monitor
    auto* monitor = app.add_subcommand("monitor", "Score a CSV against a bank");
    std::string mon_bank, mon_data, mon_report;
    monitor->add_option("--bank", mon_bank, "bank JSON")->required();
    monitor->add_option("--data", mon_data, "data CSV")->required();
    monitor->add_option("--report-out", mon_report, "output report CSV")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Detection metrics from a monitor report");
    std::string eval_report;
    std::size_t eval_fault_start = 0;
    std::size_t eval_r = 10;
    evaluate->add_option("--report", eval_report, "monitor report CSV")->required();
    evaluate->add_option("--fault-start", eval_fault_start, "first faulted sample index");
    evaluate->add_option("--run-length", eval_r, "sustained-alarm run length");

    // trace
    auto* trace = app.add_subcommand("trace", "Render the phi trace of a report as SVG + CSV");
    std::string trace_report, trace_svg;
    trace->add_option("--report", trace_report, "monitor report CSV")->required();
    trace->add_option("--svg-out", trace_svg, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) {
            auto cfg = mpca::load_plant_config(synth_config);
            std::uint64_t seed = synth_seed_opt->count() > 0 ? synth_seed : cfg.seed;
            auto data = mpca::generate_plant(cfg, seed);
            mpca::write_csv(data, synth_out);
            std::printf("wrote %zu samples x %zu variables to %s (seed %llu)\n",
                        data.n_samples(), data.n_variables(), synth_out.c_str(),
                        static_cast<unsigned long long>(seed));
        } else if (*inject) {
            auto loaded = mpca::read_csv(inject_in);
            auto spec = mpca::FaultSpec::parse(inject_fault_text);
            if (inject_percent) {
                int var = loaded.data.variable_index(spec.variable);
                if (var < 0)
                    throw mpca::Error(mpca::ErrorKind::SchemaMismatch,
                                      "unknown variable '" + spec.variable + "'");
                double mean =
                    mpca::column_mean(loaded.data.values.column(static_cast<std::size_t>(var)));
                spec.magnitude = mean * spec.magnitude / 100.0;
            }
            auto faulted = mpca::inject_fault(loaded.data, spec);
            mpca::write_csv(faulted, inject_out);
            std::printf("injected %s fault on %s (magnitude %g) -> %s\n",
                        spec.kind == mpca::FaultKind::bias ? "bias" : "drift",
                        spec.variable.c_str(), spec.magnitude, inject_out.c_str());
        } else if (*train) {
            GlobalConfig config;
            if (!tf.config_path.empty()) config = mpca::load_config(tf.config_path);
            if (opt_alpha->count()) config.alpha = tf.alpha;
            if (opt_cpv->count()) config.cpv_target = tf.cpv;
            if (opt_chauv->count()) {
                if (tf.chauvenet != "on" && tf.chauvenet != "off")
                    throw mpca::Error(mpca::ErrorKind::InvalidParameter,
                                      "--chauvenet expects on|off");
                config.chauvenet = tf.chauvenet == "on";
            }
            if (opt_tk->count()) config.transient_k = tf.transient_k;
            if (opt_den->count()) config.denoise_levels = tf.denoise;
            if (opt_r->count()) config.run_length_r = tf.run_length;
            if (opt_slack->count()) config.match_slack = tf.match_slack;
            if (opt_min->count()) config.min_samples_per_condition = tf.min_samples;
            if (opt_t2v->count())
                config.t2_limit_variant = mpca::limit_variant_from_string(tf.t2_variant);
            if (opt_spev->count())
                config.spe_h0_variant = mpca::limit_variant_from_string(tf.spe_variant);
            config.validate();

            auto loaded = mpca::read_csv(tf.data_path);
            if (loaded.rows_dropped > 0)
                std::printf("dropped %zu rows with missing values\n", loaded.rows_dropped);
            auto result = mpca::train_bank(loaded.data, config, tf.k_override);
            for (const auto& w : result.priors.warnings) std::printf("warning: %s\n", w.c_str());
            std::printf("cleaning: %zu -> %zu rows (outliers %zu, transients %zu)\n",
                        loaded.data.n_samples(), result.cleaned.n_samples(),
                        result.chauvenet_report.rows_in - result.chauvenet_report.rows_out,
                        result.transient_report.transients_removed);
            mpca::save_bank(result.bank, tf.bank_out);
            std::printf("bank with %zu submodels written to %s\n\n",
                        result.bank.submodels.size(), tf.bank_out.c_str());
            print_bank_summary(result.bank);
        } else if (*monitor) {
            auto bank = mpca::load_bank(mon_bank);
            auto loaded = mpca::read_csv(mon_data);
            auto records = mpca::monitor_stream(loaded.data, bank);
            mpca::write_monitor_report(records, mon_report);
            std::size_t matched = 0, alarms = 0;
            for (const auto& r : records) {
                if (r.condition_id) ++matched;
                if (r.alarm == mpca::Alarm::fault) ++alarms;
            }
            std::printf("scored %zu samples: %zu matched, %zu alarms -> %s\n", records.size(),
                        matched, alarms, mon_report.c_str());
        } else if (*evaluate) {
            auto records = mpca::read_monitor_report(eval_report);
            auto rep = mpca::detection_metrics(records, eval_fault_start, eval_r);
            std::cout << report_to_json(rep).dump(2) << '\n';
        } else if (*trace) {
            auto records = mpca::read_monitor_report(trace_report);
            std::string csv_path = trace_csv_path(trace_svg);
            mpca::write_phi_trace(records, trace_svg, csv_path);
            std::printf("wrote %s and %s\n", trace_svg.c_str(), csv_path.c_str());
        }
    } catch (const mpca::Error& e) {
        std::cerr << "error (" << mpca::error_kind_name(e.kind()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
