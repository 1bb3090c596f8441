#include "mpca/bank_io.hpp"
#include "mpca/dataset.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#ifndef MPCA_CLI_PATH
#define MPCA_CLI_PATH "mpca"
#endif
#ifndef MPCA_CONFIG_DIR
#define MPCA_CONFIG_DIR "configs"
#endif

namespace {

namespace fs = std::filesystem;

struct CliFixture {
    fs::path dir;
    CliFixture() {
        dir = fs::temp_directory_path() /
              ("mpca_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~CliFixture() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }

    int run(const std::string& args) const {
        std::string cmd = std::string(MPCA_CLI_PATH) + " " + args + " > " +
                          path("stdout.txt") + " 2> " + path("stderr.txt");
        int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    }

    std::string stdout_text() const {
        std::ifstream in(path("stdout.txt"));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kReplica = std::string(MPCA_CONFIG_DIR) + "/replica_plant.json";

} // namespace

TEST_CASE("cli end-to-end pipeline") {
    CliFixture fx;

    // synth
    REQUIRE(fx.run("synth --config " + kReplica + " --out " + fx.path("train.csv") +
                   " --seed 300") == 0);
    {
        std::ifstream in(fx.path("train.csv"));
        std::string header;
        std::getline(in, header);
        CHECK(header ==
              "timestamp,t_chw_in,t_chw_out,f_chw,t_cw_in,t_cw_out,f_cw,"
              "meta:units_running,meta:climate,meta:occupancy,meta:transient");
    }

    // identical seed, identical bytes
    REQUIRE(fx.run("synth --config " + kReplica + " --out " + fx.path("train2.csv") +
                   " --seed 300") == 0);
    CHECK(slurp(fx.path("train.csv")) == slurp(fx.path("train2.csv")));

    // train (multi) and train (single baseline)
    REQUIRE(fx.run("train --data " + fx.path("train.csv") + " --bank-out " +
                   fx.path("bank.json")) == 0);
    CHECK(fx.stdout_text().find("phi_limit") != std::string::npos);
    auto bank = mpca::load_bank(fx.path("bank.json"));
    CHECK(bank.submodels.size() == 3);

    REQUIRE(fx.run("train --data " + fx.path("train.csv") + " --bank-out " +
                   fx.path("bank1.json") + " --k-override 1") == 0);
    CHECK(mpca::load_bank(fx.path("bank1.json")).submodels.size() == 1);

    // inject a bias into fresh data and monitor it
    REQUIRE(fx.run("synth --config " + kReplica + " --out " + fx.path("test.csv") +
                   " --seed 301") == 0);
    REQUIRE(fx.run("inject --in " + fx.path("test.csv") + " --out " + fx.path("faulted.csv") +
                   " --fault bias:var=t_chw_in,mag=1.0,start=0") == 0);
    REQUIRE(fx.run("monitor --bank " + fx.path("bank.json") + " --data " +
                   fx.path("faulted.csv") + " --report-out " + fx.path("report.csv")) == 0);

    // evaluate prints the metric fields
    REQUIRE(fx.run("evaluate --report " + fx.path("report.csv") + " --fault-start 0") == 0);
    auto eval_out = fx.stdout_text();
    CHECK(eval_out.find("detection_rate") != std::string::npos);
    CHECK(eval_out.find("first_sustained_index") != std::string::npos);

    // trace emits SVG + CSV that agree point for point
    REQUIRE(fx.run("trace --report " + fx.path("report.csv") + " --svg-out " +
                   fx.path("trace.svg")) == 0);
    std::string svg = slurp(fx.path("trace.svg"));
    CHECK(svg.find("<polyline") != std::string::npos);
    std::string trace_csv = slurp(fx.path("trace.csv"));
    std::size_t csv_rows = static_cast<std::size_t>(
        std::count(trace_csv.begin(), trace_csv.end(), '\n')) - 1;
    auto points_start = svg.find("points=\"", svg.find("<polyline"));
    REQUIRE(points_start != std::string::npos);
    auto points_end = svg.find('"', points_start + 8);
    std::string points = svg.substr(points_start + 8, points_end - points_start - 8);
    std::size_t n_points = static_cast<std::size_t>(
        std::count(points.begin(), points.end(), ','));
    CHECK(n_points == csv_rows);
}

TEST_CASE("trace renders one polyline point per scored record") {
    CliFixture fx;
    REQUIRE(fx.run("synth --config " + kReplica + " --out " + fx.path("t.csv") +
                   " --seed 310") == 0);
    REQUIRE(fx.run("train --data " + fx.path("t.csv") + " --bank-out " + fx.path("b.json")) ==
            0);
    REQUIRE(fx.run("monitor --bank " + fx.path("b.json") + " --data " + fx.path("t.csv") +
                   " --report-out " + fx.path("r.csv")) == 0);

    // keep header + first 10 rows
    std::istringstream full(slurp(fx.path("r.csv")));
    std::ofstream cut(fx.path("r10.csv"));
    std::string line;
    for (int i = 0; i <= 10 && std::getline(full, line); ++i) cut << line << '\n';
    cut.close();

    REQUIRE(fx.run("trace --report " + fx.path("r10.csv") + " --svg-out " +
                   fx.path("r10.svg")) == 0);
    std::string svg = slurp(fx.path("r10.svg"));
    auto points_start = svg.find("points=\"", svg.find("<polyline"));
    REQUIRE(points_start != std::string::npos);
    auto points_end = svg.find('"', points_start + 8);
    std::string points = svg.substr(points_start + 8, points_end - points_start - 8);
    CHECK(std::count(points.begin(), points.end(), ',') == 10);
}

TEST_CASE("train reads a config file and flags override it") {
    CliFixture fx;
    REQUIRE(fx.run("synth --config " + kReplica + " --out " + fx.path("d.csv") +
                   " --seed 320") == 0);
    {
        std::ofstream cfg(fx.path("cfg.json"));
        cfg << "{\"alpha\": 0.95, \"t2_limit_variant\": \"paper_printed\"}\n";
    }
    REQUIRE(fx.run("train --data " + fx.path("d.csv") + " --bank-out " + fx.path("b.json") +
                   " --config " + fx.path("cfg.json") + " --alpha 0.97") == 0);
    auto bank = mpca::load_bank(fx.path("b.json"));
    CHECK(bank.config.alpha == 0.97); // flag wins over the file
    CHECK(bank.config.t2_limit_variant == mpca::LimitVariant::paper_printed);
}

TEST_CASE("cli exit codes") {
    CliFixture fx;
    // usage error: missing required option
    CHECK(fx.run("synth --out " + fx.path("x.csv")) == 1);
    // data error: bad config path (message names the path)
    CHECK(fx.run("synth --config /no/such/config.json --out " + fx.path("x.csv")) == 2);
    CHECK(slurp(fx.path("stderr.txt")).find("/no/such/config.json") != std::string::npos);
    // model error: missing bank
    CHECK(fx.run("monitor --bank /no/bank.json --data /no/data.csv --report-out " +
                 fx.path("r.csv")) == 2);
    // empty report for trace
    std::ofstream empty(fx.path("empty.csv"));
    empty << "sample_index,timestamp,condition_id,t2,spe,phi,t2_limit,spe_limit,phi_limit,"
             "alarm\n";
    empty.close();
    CHECK(fx.run("trace --report " + fx.path("empty.csv") + " --svg-out " +
                 fx.path("e.svg")) == 2);
}
