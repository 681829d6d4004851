#include "sbcool/csv.hpp"

#include <fstream>

#include "sbcool/dataset.hpp"
#include "sbcool/errors.hpp"

namespace sbcool {

void CsvTable::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw UsageError("CsvTable: row width does not match header");
    rows.push_back(std::move(cells));
}

void write_csv(const CsvTable& table, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw DataError("cannot write csv file: " + file.string());
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (std::holds_alternative<double>(row[i]))
                out << format_double(std::get<double>(row[i]));
            else if (std::holds_alternative<long>(row[i]))
                out << std::get<long>(row[i]);
            else
                out << std::get<std::string>(row[i]);
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + file.string());
}

}  // namespace sbcool
