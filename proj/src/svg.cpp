#include "rhosum/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhosum {

namespace {

double tx(double v, bool log) { return log ? std::log10(v) : v; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace

std::string render_svg_chart(const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, const std::vector<SvgSeries>& series,
                             bool logx, bool logy) {
    const int W = 640, H = 440, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, tx(x, logx));
            xmax = std::max(xmax, tx(x, logx));
            ymin = std::min(ymin, tx(y, logy));
            ymax = std::max(ymax, tx(y, logy));
        }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto px = [&](double x) { return ML + (tx(x, logx) - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (tx(y, logy) - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
       << "</text>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = xmin + (xmax - xmin) * i / 4.0;
        double fy = ymin + (ymax - ymin) * i / 4.0;
        double vx = logx ? std::pow(10, fx) : fx;
        double vy = logy ? std::pow(10, fy) : fy;
        double X = ML + (W - ML - MR) * i / 4.0;
        double Y = H - MB - (H - MT - MB) * i / 4.0;
        os << "<text x=\"" << X << "\" y=\"" << H - MB + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(vx) << "</text>\n";
        os << "<text x=\"" << ML - 8 << "\" y=\"" << Y + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(vy) << "</text>\n";
        os << "<line x1=\"" << X << "\" y1=\"" << H - MB << "\" x2=\"" << X << "\" y2=\""
           << H - MB + 4 << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << ML - 4 << "\" y1=\"" << Y << "\" x2=\"" << ML << "\" y2=\"" << Y
           << "\" stroke=\"black\"/>\n";
    }
    os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (MT + H - MB) / 2 << ")\">" << ylabel << "</text>\n";

    int li = 0;
    for (const auto& s : series) {
        if (s.line && s.points.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (auto [x, y] : s.points) os << px(x) << "," << py(y) << " ";
            os << "\"/>\n";
        }
        for (auto [x, y] : s.points)
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\""
               << s.color << "\"/>\n";
        if (!s.name.empty()) {
            os << "<text x=\"" << W - MR - 6 << "\" y=\"" << MT + 14 + 16 * li
               << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.name
               << "</text>\n";
            ++li;
        }
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
}

} // namespace rhosum
