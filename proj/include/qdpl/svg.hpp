// svg.hpp — dependency-free polyline plots; a convenience view of the CSV data.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "qdpl/csv.hpp"
#include "qdpl/errors.hpp"

namespace qdpl {

struct SvgSeries {
    std::string label;
    std::string color;
    std::span<const double> y;
};

inline void write_svg_plot(const std::string& path, std::span<const double> x,
                           const std::vector<SvgSeries>& series, const std::string& x_label,
                           const std::string& y_label, bool log_y = false) {
    if (x.empty() || series.empty()) throw Error("write_svg_plot: nothing to plot");
    const double W = 860, H = 520, ml = 80, mr = 20, mt = 20, mb = 60;
    double xmin = x.front(), xmax = x.back();
    double ymin = 0, ymax = 0;
    bool first = true;
    for (const auto& s : series)
        for (double v : s.y) {
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (log_y) {
        const double floor_v = ymax > 0 ? ymax * 1e-9 : 1e-300;
        ymax = std::log10(std::max(ymax, floor_v));
        ymin = ymax - 9.0;
    } else if (ymax == ymin) {
        ymax = ymin + 1.0;
    }
    auto tx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto ty = [&](double v) {
        if (log_y) v = std::log10(std::max(v, std::pow(10.0, ymin)));
        return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb);
    };

    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr << "' height='"
        << H - mt - mb << "' fill='none' stroke='black'/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        out << "<text x='" << tx(fx) << "' y='" << H - mb + 20
            << "' font-size='12' text-anchor='middle'>" << format_number(fx) << "</text>\n";
        out << "<text x='" << ml - 8 << "' y='" << H - mb - (H - mt - mb) * i / 5.0 + 4
            << "' font-size='12' text-anchor='end'>" << (log_y ? "1e" : "")
            << format_number(log_y ? fy : fy) << "</text>\n";
    }
    out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 15
        << "' font-size='14' text-anchor='middle'>" << x_label << "</text>\n";
    out << "<text x='18' y='" << (mt + H - mb) / 2 << "' font-size='14' text-anchor='middle' "
        << "transform='rotate(-90 18 " << (mt + H - mb) / 2 << ")'>" << y_label << "</text>\n";
    int li = 0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < x.size() && i < s.y.size(); ++i)
            out << tx(x[i]) << "," << ty(s.y[i]) << " ";
        out << "'/>\n";
        out << "<text x='" << W - mr - 150 << "' y='" << mt + 20 + 18 * li << "' font-size='13' "
            << "fill='" << s.color << "'>" << s.label << "</text>\n";
        ++li;
    }
    out << "</svg>\n";
}

} // namespace qdpl
