#include "mpca/bank_io.hpp"

#include "mpca/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>

namespace mpca {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json loadings_to_json(const Matrix& loadings) {
    json rows = json::array();
    for (std::size_t i = 0; i < loadings.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < loadings.cols(); ++j) r.push_back(loadings(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix loadings_from_json(const json& rows) {
    std::size_t m = rows.size();
    std::size_t l = m > 0 ? rows[0].size() : 0;
    Matrix out(m, l);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != l)
            throw Error(ErrorKind::Format, "bank: ragged loading matrix");
        for (std::size_t j = 0; j < l; ++j) out(i, j) = rows[i][j].get<double>();
    }
    return out;
}

json submodel_to_json(const PcaSubmodel& s) {
    return json{
        {"condition_id", s.condition_id},
        {"prior_key",
         {{"units_running", s.prior_key.units_running},
          {"climate", climate_to_string(s.prior_key.climate)},
          {"occupancy", occupancy_to_string(s.prior_key.occupancy)}}},
        {"mu", s.standardization.mu},
        {"sigma", s.standardization.sigma},
        {"centroid", s.centroid},
        {"loadings", loadings_to_json(s.loadings)},
        {"eigenvalues", s.eigenvalues},
        {"l", s.l},
        {"n_train", s.n_train},
        {"t2_limit", s.t2_limit},
        {"spe_limit", s.spe_limit},
        {"phi_limit", s.phi_limit},
        {"max_match_distance", s.max_match_distance},
    };
}

PcaSubmodel submodel_from_json(const json& j) {
    PcaSubmodel s;
    s.condition_id = j.at("condition_id").get<int>();
    const auto& jk = j.at("prior_key");
    s.prior_key.units_running = jk.at("units_running").get<std::string>();
    s.prior_key.climate = climate_from_string(jk.at("climate").get<std::string>());
    s.prior_key.occupancy = occupancy_from_string(jk.at("occupancy").get<std::string>());
    s.standardization.mu = j.at("mu").get<Vector>();
    s.standardization.sigma = j.at("sigma").get<Vector>();
    s.centroid = j.at("centroid").get<Vector>();
    s.loadings = loadings_from_json(j.at("loadings"));
    s.eigenvalues = j.at("eigenvalues").get<Vector>();
    s.l = j.at("l").get<std::size_t>();
    s.n_train = j.at("n_train").get<std::size_t>();
    s.t2_limit = j.at("t2_limit").get<double>();
    s.spe_limit = j.at("spe_limit").get<double>();
    s.phi_limit = j.at("phi_limit").get<double>();
    s.max_match_distance = j.at("max_match_distance").get<double>();
    return s;
}

json bank_payload(const ModelBank& bank) {
    json submodels = json::array();
    for (const auto& s : bank.submodels) submodels.push_back(submodel_to_json(s));
    return json{
        {"config", bank.config},
        {"variable_names", bank.variable_names},
        {"global_standardization",
         {{"mu", bank.global_standardization.mu}, {"sigma", bank.global_standardization.sigma}}},
        {"submodels", std::move(submodels)},
    };
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

} // namespace

void save_bank(const ModelBank& bank, const std::string& path) {
    bank.validate();
    json payload = bank_payload(bank);
    json doc{
        {"format_version", bank.format_version},
        {"checksum", fnv1a_hex(payload.dump())},
        {"bank", std::move(payload)},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write bank '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out)
        throw Error(ErrorKind::Io, "write failed for bank '" + path + "'");
}

ModelBank load_bank(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open bank '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Format, "bank '" + path + "': " + e.what());
    }

    try {
        int version = doc.at("format_version").get<int>();
        if (version != ModelBank::kFormatVersion)
            throw Error(ErrorKind::UnsupportedVersion,
                        "bank '" + path + "' has format_version " + std::to_string(version));
        const json& payload = doc.at("bank");
        if (fnv1a_hex(payload.dump()) != doc.at("checksum").get<std::string>())
            throw Error(ErrorKind::Corruption, "bank '" + path + "': checksum mismatch");

        ModelBank bank;
        bank.format_version = version;
        bank.config = payload.at("config").get<GlobalConfig>();
        bank.variable_names = payload.at("variable_names").get<std::vector<std::string>>();
        bank.global_standardization.mu =
            payload.at("global_standardization").at("mu").get<Vector>();
        bank.global_standardization.sigma =
            payload.at("global_standardization").at("sigma").get<Vector>();
        for (const auto& js : payload.at("submodels")) bank.submodels.push_back(submodel_from_json(js));
        bank.validate();
        return bank;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Format, "bank '" + path + "': " + e.what());
    }
}

void write_monitor_report(const std::vector<MonitorRecord>& records, const std::string& path) {
    if (records.empty())
        throw Error(ErrorKind::EmptyDataset, "write_monitor_report: no records");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write report '" + path + "'");
    out << "sample_index,timestamp,condition_id,t2,spe,phi,t2_limit,spe_limit,phi_limit,alarm\n";
    for (const auto& rec : records) {
        out << rec.sample_index << ',' << format_iso8601(rec.timestamp) << ',';
        if (rec.condition_id) out << *rec.condition_id;
        else out << "none";
        std::optional<double> t2, spe, phi, lt2, lspe, lphi;
        if (rec.indices) {
            t2 = rec.indices->t2;
            spe = rec.indices->spe;
            phi = rec.indices->phi;
        }
        if (rec.limits) {
            lt2 = rec.limits->t2;
            lspe = rec.limits->spe;
            lphi = rec.limits->phi;
        }
        out << ',' << format_optional(t2) << ',' << format_optional(spe) << ','
            << format_optional(phi) << ',' << format_optional(lt2) << ','
            << format_optional(lspe) << ',' << format_optional(lphi) << ','
            << alarm_to_string(rec.alarm) << '\n';
    }
    if (!out)
        throw Error(ErrorKind::Io, "write failed for report '" + path + "'");
}

std::vector<MonitorRecord> read_monitor_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open report '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorKind::EmptyDataset, "report '" + path + "' is empty");
    auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"sample_index", "timestamp", "condition_id",
                                               "t2",           "spe",       "phi",
                                               "t2_limit",     "spe_limit", "phi_limit",
                                               "alarm"};
    if (std::vector<std::string>(header.begin(), header.end()) != expected)
        throw Error(ErrorKind::Format, "report '" + path + "': unexpected header");

    auto parse_opt = [&](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        double v;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw Error(ErrorKind::Format, "report '" + path + "': bad number '" + s + "'");
        return v;
    };

    std::vector<MonitorRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != expected.size())
            throw Error(ErrorKind::Format, "report '" + path + "': wrong field count");
        MonitorRecord rec;
        auto res = std::from_chars(f[0].data(), f[0].data() + f[0].size(), rec.sample_index);
        if (res.ec != std::errc())
            throw Error(ErrorKind::Format, "report '" + path + "': bad sample index");
        rec.timestamp = parse_iso8601(f[1]);
        if (f[2] != "none") {
            int id;
            auto r2 = std::from_chars(f[2].data(), f[2].data() + f[2].size(), id);
            if (r2.ec != std::errc())
                throw Error(ErrorKind::Format, "report '" + path + "': bad condition id");
            rec.condition_id = id;
        }
        auto t2 = parse_opt(f[3]), spe = parse_opt(f[4]), phi = parse_opt(f[5]);
        auto lt2 = parse_opt(f[6]), lspe = parse_opt(f[7]), lphi = parse_opt(f[8]);
        if (t2 && spe && phi) rec.indices = IndexTriple{*t2, *spe, *phi};
        if (lt2 && lspe && lphi) rec.limits = IndexTriple{*lt2, *lspe, *lphi};
        rec.alarm = alarm_from_string(f[9]);
        records.push_back(std::move(rec));
    }
    if (records.empty())
        throw Error(ErrorKind::EmptyDataset, "report '" + path + "' has no rows");
    return records;
}

} // namespace mpca
