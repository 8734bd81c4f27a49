#include "critcluster/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace critcluster {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<CsvComment>& trailing) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i)
        f << header[i] << (i + 1 < header.size() ? "," : "");
    f << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            f << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        f << "\n";
    }
    for (const auto& c : trailing) f << "# " << c.text << "\n";
}

void write_svg_plot(const std::string& path,
                    const std::vector<std::pair<double, double>>& points,
                    const std::vector<SvgMarker>& markers, const std::string& title) {
    if (points.empty()) throw std::runtime_error("svg plot: no points");
    double xmin = points[0].first, xmax = xmin, ymin = points[0].second, ymax = ymin;
    for (auto [x, y] : points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax - xmin < 1e-300) xmax = xmin + 1;
    if (ymax - ymin < 1e-300) ymax = ymin + 1;
    const double W = 720, H = 480, L = 60, B = 40, T = 30, R = 20;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T); };

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='18' text-anchor='middle' font-size='14'>" << title
      << "</text>\n";
    f << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
      << "' stroke='black'/>\n";
    f << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
      << "' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        double x = xmin + (xmax - xmin) * k / 4;
        double y = ymin + (ymax - ymin) * k / 4;
        f << "<text x='" << px(x) << "' y='" << H - B + 16
          << "' text-anchor='middle' font-size='10'>" << format_double(x).substr(0, 8)
          << "</text>\n";
        f << "<text x='" << L - 6 << "' y='" << py(y) + 3
          << "' text-anchor='end' font-size='10'>" << format_double(y).substr(0, 8)
          << "</text>\n";
    }
    f << "<polyline fill='none' stroke='steelblue' stroke-width='1.2' points='";
    for (auto [x, y] : points) f << px(x) << "," << py(y) << " ";
    f << "'/>\n";
    for (const auto& m : markers) {
        f << "<circle cx='" << px(m.x) << "' cy='" << py(m.y)
          << "' r='4' fill='crimson'/>\n";
        f << "<text x='" << px(m.x) + 6 << "' y='" << py(m.y) - 6 << "' font-size='10'>"
          << m.label << "</text>\n";
    }
    f << "</svg>\n";
}

}  // namespace critcluster
