#include "sbcool/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "sbcool/dataset.hpp"
#include "sbcool/errors.hpp"

namespace sbcool {

namespace {

constexpr double width = 640, height = 420;
constexpr double ml = 70, mr = 20, mt = 36, mb = 48;  // margins

std::string fmt(double v) { return format_double(v); }

}  // namespace

void write_svg_plot(const std::filesystem::path& file, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (double v : s.x) {
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write svg file: " + file.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    // frame and tick labels at the corners of the data range
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
        << "\" height=\"" << height - mt - mb
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << height - mb + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(fx) << "</text>\n"
            << "<text x=\"" << ml - 6 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"5,4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        out << "\"/>\n";
        if (!s.label.empty()) {
            out << "<line x1=\"" << width - mr - 130 << "\" x2=\"" << width - mr - 104
                << "\" y1=\"" << legend_y << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "")
                << "/>\n"
                << "<text x=\"" << width - mr - 98 << "\" y=\"" << legend_y + 4
                << "\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    out << "</svg>\n";
    if (!out) throw DataError("write failed: " + file.string());
}

}  // namespace sbcool
