#include "mpca/trace.hpp"

#include "mpca/dataset.hpp"
#include "mpca/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

namespace mpca {

namespace {

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

void write_phi_trace(const std::vector<MonitorRecord>& records, const std::string& svg_path,
                     const std::string& csv_path) {
    std::vector<std::pair<std::size_t, double>> points;
    std::map<double, std::size_t> limit_counts;
    for (const auto& rec : records) {
        if (!rec.indices || !rec.limits) continue;
        points.emplace_back(rec.sample_index, rec.indices->phi);
        ++limit_counts[rec.limits->phi];
    }
    if (points.empty())
        throw Error(ErrorKind::EmptyDataset, "trace: report contains no scored samples");

    // the most frequent phi limit draws the horizontal line (ties: smallest)
    double limit = limit_counts.begin()->first;
    std::size_t best = 0;
    for (const auto& [value, count] : limit_counts) {
        if (count > best) {
            best = count;
            limit = value;
        }
    }

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv)
        throw Error(ErrorKind::Io, "cannot write '" + csv_path + "'");
    csv << "sample_index,phi\n";
    for (const auto& [idx, phi] : points) csv << idx << ',' << format_double(phi) << '\n';

    const double width = 960, height = 420;
    const double left = 64, right = 20, top = 24, bottom = 44;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = static_cast<double>(points.front().first);
    double x_max = static_cast<double>(points.back().first);
    if (x_max <= x_min) x_max = x_min + 1.0;
    double y_max = limit;
    for (const auto& [idx, phi] : points) y_max = std::max(y_max, phi);
    y_max *= 1.05;
    if (y_max <= 0.0) y_max = 1.0;

    auto sx = [&](double i) { return left + (i - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double v) { return top + plot_h - v / y_max * plot_h; };

    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg)
        throw Error(ErrorKind::Io, "cannot write '" + svg_path + "'");

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg << "  <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(top + plot_h)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "  <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(top + plot_h) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (int t = 0; t <= 5; ++t) {
        double v = y_max * t / 5.0;
        double y = sy(v);
        svg << "  <line x1=\"" << fixed(left - 4) << "\" y1=\"" << fixed(y) << "\" x2=\""
            << fixed(left) << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n"
            << "  <text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fixed(v, 3) << "</text>\n";
        double xi = x_min + (x_max - x_min) * t / 5.0;
        double x = sx(xi);
        svg << "  <line x1=\"" << fixed(x) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
            << fixed(x) << "\" y2=\"" << fixed(top + plot_h + 4) << "\" stroke=\"black\"/>\n"
            << "  <text x=\"" << fixed(x) << "\" y=\"" << fixed(top + plot_h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed(xi, 0) << "</text>\n";
    }
    svg << "  <text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 8)
        << "\" font-size=\"12\" text-anchor=\"middle\">sample index</text>\n";
    svg << "  <text x=\"16\" y=\"" << fixed(top + plot_h / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fixed(top + plot_h / 2) << ")\">combined index</text>\n";

    // control limit
    svg << "  <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(sy(limit)) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(sy(limit))
        << "\" stroke=\"red\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n"
        << "  <text x=\"" << fixed(left + plot_w - 4) << "\" y=\"" << fixed(sy(limit) - 5)
        << "\" font-size=\"11\" fill=\"red\" text-anchor=\"end\">limit " << fixed(limit, 4)
        << "</text>\n";

    svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) svg << ' ';
        svg << fixed(sx(static_cast<double>(points[i].first))) << ','
            << fixed(sy(points[i].second));
    }
    svg << "\"/>\n</svg>\n";
    if (!svg)
        throw Error(ErrorKind::Io, "write failed for '" + svg_path + "'");
}

} // namespace mpca
