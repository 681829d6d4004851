#include "sbcool/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sbcool/errors.hpp"

namespace sbcool {

void Dataset::validate() const {
    for (const Point& p : points) {
        if (!std::isfinite(p.x)) throw std::domain_error("Dataset: x must be finite");
        if (!std::isfinite(p.y)) throw std::domain_error("Dataset: y must be finite");
        if (!(p.sigma_y > 0.0) || !std::isfinite(p.sigma_y))
            throw std::domain_error("Dataset: sigma_y must be finite and > 0");
    }
}

double Dataset::meta_number(const std::string& key) const {
    auto it = metadata.find(key);
    if (it == metadata.end())
        throw DataError("dataset '" + label + "': missing metadata key '" + key + "'");
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw DataError("dataset '" + label + "': metadata key '" + key +
                        "' is not a number: " + it->second);
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, end);
}

namespace {

double parse_field(const std::string& field, const std::filesystem::path& file, int lineno) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw DataError(file.string() + ":" + std::to_string(lineno) +
                        ": cannot parse number '" + field + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void read_sidecar(const std::filesystem::path& file, Dataset& d) {
    const std::filesystem::path meta = file.string() + ".meta";
    std::ifstream in(meta);
    if (!in) return;  // sidecar is optional
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError(meta.string() + ":" + std::to_string(lineno) +
                            ": expected key=value");
        d.metadata[line.substr(0, eq)] = line.substr(eq + 1);
    }
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open dataset file: " + file.string());

    Dataset d;
    d.label = file.stem().string();

    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            if (header_seen && !line.empty())
                throw DataError(file.string() + ":" + std::to_string(lineno) +
                                ": comment lines are only allowed before the header");
            continue;
        }
        auto fields = split_csv_line(line);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "x" || fields[1] != "y" ||
                fields[2] != "sigma_y")
                throw DataError(file.string() + ":" + std::to_string(lineno) +
                                ": expected header 'x,y,sigma_y'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 3)
            throw DataError(file.string() + ":" + std::to_string(lineno) +
                            ": expected 3 comma-separated fields, got " +
                            std::to_string(fields.size()));
        Dataset::Point p;
        p.x = parse_field(fields[0], file, lineno);
        p.y = parse_field(fields[1], file, lineno);
        p.sigma_y = parse_field(fields[2], file, lineno);
        d.points.push_back(p);
    }
    if (!header_seen)
        throw DataError(file.string() + ": missing 'x,y,sigma_y' header");
    read_sidecar(file, d);
    d.validate();
    return d;
}

void write_dataset_csv(const Dataset& d, const std::filesystem::path& file) {
    d.validate();
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file: " + file.string());
    out << "x,y,sigma_y\n";
    for (const Dataset::Point& p : d.points)
        out << format_double(p.x) << ',' << format_double(p.y) << ','
            << format_double(p.sigma_y) << '\n';
    if (!out) throw DataError("write failed: " + file.string());
    if (!d.metadata.empty()) {
        const std::filesystem::path meta = file.string() + ".meta";
        std::ofstream mout(meta, std::ios::binary);
        if (!mout) throw DataError("cannot write sidecar file: " + meta.string());
        for (const auto& [k, v] : d.metadata) mout << k << '=' << v << '\n';
        if (!mout) throw DataError("write failed: " + meta.string());
    }
}

}  // namespace sbcool
