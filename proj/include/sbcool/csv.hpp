#pragma once

// Column-oriented CSV emission for curves, line lists, and snapshots.
// Numeric cells use shortest round-trip formatting.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace sbcool {

struct CsvTable {
    std::vector<std::string> columns;
    using Cell = std::variant<double, long, std::string>;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

void write_csv(const CsvTable& table, const std::filesystem::path& file);

}  // namespace sbcool
