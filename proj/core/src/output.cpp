#include "nle/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nle/field_io.hpp"

namespace nle {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) throw std::invalid_argument("CsvTable: row width differs from header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str(const std::vector<std::string>& comments) const {
    std::ostringstream os;
    for (const auto& c : comments) os << "# " << c << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << cells[k];
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

void CsvTable::write(const std::filesystem::path& path, const std::vector<std::string>& comments) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << str(comments);
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

}  // namespace nle
