#pragma once

#include <string>
#include <vector>

namespace rhosum {

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool line = true;
};

/// Static chart rendering of already-computed rows; no computation here.
std::string render_svg_chart(const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, const std::vector<SvgSeries>& series,
                             bool logx = false, bool logy = false);

void write_file(const std::string& path, const std::string& content);

} // namespace rhosum
