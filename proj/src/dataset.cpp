#include "mpca/dataset.hpp"

#include "mpca/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace mpca {

namespace {

// Howard Hinnant's civil-date algorithms (proleptic Gregorian).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yr + (m <= 2));
}

bool parse_int_field(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

bool try_parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    if (begin == end) return false;
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

std::string strip_meta_prefix(const std::string& name) {
    if (name.rfind("meta:", 0) == 0) return name.substr(5);
    return name;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::int64_t parse_iso8601(const std::string& text) {
    std::string s = trim(text);
    // Bare integers are accepted as epoch seconds.
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-') &&
        s.find_first_of(":-T ", 1) == std::string::npos) {
        std::int64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    }
    int year, month, day, hour = 0, minute = 0, second = 0;
    bool ok = s.size() >= 10 && parse_int_field(s, 0, 4, year) && s[4] == '-' &&
              parse_int_field(s, 5, 2, month) && s[7] == '-' &&
              parse_int_field(s, 8, 2, day);
    if (ok && s.size() > 10) {
        ok = (s[10] == 'T' || s[10] == ' ') && s.size() >= 19 &&
             parse_int_field(s, 11, 2, hour) && s[13] == ':' &&
             parse_int_field(s, 14, 2, minute) && s[16] == ':' &&
             parse_int_field(s, 17, 2, second);
        if (ok && s.size() > 19 && s.substr(19) != "Z")
            ok = false;
    }
    if (!ok || month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
        minute > 59 || second > 60)
        throw Error(ErrorKind::Format, "unparseable timestamp: '" + text + "'");
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // trailing CR from CRLF files
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

int TimeSeriesDataset::variable_index(const std::string& name) const {
    for (std::size_t j = 0; j < variable_names.size(); ++j)
        if (variable_names[j] == name) return static_cast<int>(j);
    return -1;
}

int TimeSeriesDataset::meta_index(const std::string& tag) const {
    std::string t = strip_meta_prefix(tag);
    for (std::size_t j = 0; j < meta_names.size(); ++j)
        if (meta_names[j] == t) return static_cast<int>(j);
    return -1;
}

TimeSeriesDataset TimeSeriesDataset::select_rows(const std::vector<bool>& keep) const {
    if (keep.size() != n_samples())
        throw Error(ErrorKind::InvalidParameter, "select_rows: mask size mismatch");
    TimeSeriesDataset out;
    out.variable_names = variable_names;
    out.meta_names = meta_names;
    std::size_t kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
    out.timestamps.reserve(kept);
    out.meta_rows.reserve(kept);
    out.values = Matrix(kept, n_variables());
    std::size_t r = 0;
    for (std::size_t i = 0; i < n_samples(); ++i) {
        if (!keep[i]) continue;
        out.timestamps.push_back(timestamps[i]);
        if (!meta_rows.empty()) out.meta_rows.push_back(meta_rows[i]);
        for (std::size_t j = 0; j < n_variables(); ++j) out.values(r, j) = values(i, j);
        ++r;
    }
    if (meta_names.empty()) out.meta_rows.assign(kept, {});
    return out;
}

void TimeSeriesDataset::validate() const {
    if (values.rows() != n_samples() || values.cols() != n_variables())
        throw Error(ErrorKind::InvalidData, "dataset: value matrix shape mismatch");
    if (meta_rows.size() != n_samples())
        throw Error(ErrorKind::InvalidData, "dataset: meta row count mismatch");
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        if (timestamps[i] <= timestamps[i - 1])
            throw Error(ErrorKind::Format, "dataset: timestamps not strictly increasing");
    for (double v : values.data())
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidData, "dataset: non-finite value");
    for (const auto& row : meta_rows)
        if (row.size() != meta_names.size())
            throw Error(ErrorKind::InvalidData, "dataset: ragged meta row");
}

CsvReadResult read_csv(const std::string& path, const std::vector<std::string>& meta_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");

    std::string header_line;
    if (!std::getline(in, header_line) || trim(header_line).empty())
        throw Error(ErrorKind::EmptyDataset, "'" + path + "' has no data");

    auto header = split_csv_line(header_line);
    if (header.size() < 2)
        throw Error(ErrorKind::Format, "'" + path + "': header needs a timestamp and at least one column");
    for (auto& h : header) h = trim(h);

    std::unordered_set<std::string> explicit_meta;
    for (const auto& c : meta_columns) {
        explicit_meta.insert(c);
        explicit_meta.insert(strip_meta_prefix(c));
    }

    std::unordered_set<std::string> seen;
    std::vector<std::size_t> numeric_cols, meta_cols;
    CsvReadResult result;
    for (std::size_t j = 1; j < header.size(); ++j) {
        const std::string& name = header[j];
        if (name.empty() || !seen.insert(name).second)
            throw Error(ErrorKind::Format, "'" + path + "': empty or duplicate column name in header");
        bool is_meta = name.rfind("meta:", 0) == 0 || explicit_meta.count(name) > 0;
        if (is_meta) {
            meta_cols.push_back(j);
            result.data.meta_names.push_back(strip_meta_prefix(name));
        } else {
            numeric_cols.push_back(j);
            result.data.variable_names.push_back(name);
        }
    }
    if (numeric_cols.empty())
        throw Error(ErrorKind::Format, "'" + path + "': no numeric columns");

    std::vector<double> flat;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++result.rows_read;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            ++result.rows_dropped;
            continue;
        }
        std::int64_t ts;
        try {
            ts = parse_iso8601(fields[0]);
        } catch (const Error&) {
            ++result.rows_dropped;
            continue;
        }
        std::vector<double> row(numeric_cols.size());
        bool ok = true;
        for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
            if (!try_parse_double(fields[numeric_cols[k]], row[k])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++result.rows_dropped;
            continue;
        }
        result.data.timestamps.push_back(ts);
        flat.insert(flat.end(), row.begin(), row.end());
        std::vector<std::string> meta(meta_cols.size());
        for (std::size_t k = 0; k < meta_cols.size(); ++k) meta[k] = trim(fields[meta_cols[k]]);
        result.data.meta_rows.push_back(std::move(meta));
    }

    std::size_t n = result.data.timestamps.size();
    if (n == 0)
        throw Error(ErrorKind::EmptyDataset, "'" + path + "': no usable rows");

    result.data.values = Matrix(n, numeric_cols.size());
    result.data.values.data() = std::move(flat);
    result.data.validate();
    return result;
}

void write_csv(const TimeSeriesDataset& data, const std::string& path) {
    data.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");

    out << "timestamp";
    for (const auto& v : data.variable_names) out << ',' << csv_escape(v);
    for (const auto& t : data.meta_names) out << ",meta:" << csv_escape(t);
    out << '\n';

    for (std::size_t i = 0; i < data.n_samples(); ++i) {
        out << format_iso8601(data.timestamps[i]);
        for (std::size_t j = 0; j < data.n_variables(); ++j)
            out << ',' << format_double(data.values(i, j));
        for (std::size_t k = 0; k < data.meta_names.size(); ++k)
            out << ',' << csv_escape(data.meta_rows[i][k]);
        out << '\n';
    }
    if (!out)
        throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

} // namespace mpca
