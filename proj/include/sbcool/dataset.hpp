#pragma once

// (x, y, sigma_y) datasets: the unit of exchange between the synthetic
// generators and the fitters. On disk a dataset is a CSV file with header
// "x,y,sigma_y" (UTF-8, comma separated, '#' comment lines allowed before
// the header) plus an optional "<file>.meta" sidecar of key=value lines.
// Numbers are written with shortest round-trip formatting, so
// write -> read -> write is byte identical.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sbcool {

struct Dataset {
    struct Point {
        double x = 0.0;
        double y = 0.0;
        double sigma_y = 0.0;  // > 0
    };

    std::vector<Point> points;
    std::string label;
    std::map<std::string, std::string> metadata;

    void validate() const;  // throws std::domain_error
    std::size_t size() const { return points.size(); }

    double meta_number(const std::string& key) const;  // throws DataError if absent/non-numeric
    bool has_meta(const std::string& key) const { return metadata.count(key) > 0; }
};

Dataset read_dataset_csv(const std::filesystem::path& file);
void write_dataset_csv(const Dataset& d, const std::filesystem::path& file);

// Shortest-round-trip decimal rendering used by all CSV/JSON writers.
std::string format_double(double v);

}  // namespace sbcool
