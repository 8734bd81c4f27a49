#pragma once

// CSV and SVG emitters for sweeps and traces. CSV doubles are printed with
// 17 significant digits so files round-trip bit-exactly.

#include <string>
#include <utility>
#include <vector>

namespace critcluster {

std::string format_double(double v);  // %.17g

struct CsvComment {
    std::string text;  // emitted verbatim after a leading "# "
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<CsvComment>& trailing = {});

struct SvgMarker {
    double x, y;
    std::string label;
};

// Minimal plot: axes, one polyline, optional extremum markers.
void write_svg_plot(const std::string& path,
                    const std::vector<std::pair<double, double>>& points,
                    const std::vector<SvgMarker>& markers, const std::string& title);

}  // namespace critcluster
