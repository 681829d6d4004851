#pragma once

// Minimal self-contained SVG line plots, enough to eyeball simulated curves
// without any plotting dependency.

#include <filesystem>
#include <string>
#include <vector>

namespace sbcool {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

void write_svg_plot(const std::filesystem::path& file, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series);

}  // namespace sbcool
