#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nle {

/// CSV text table with leading `# key=value` comment lines.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string str(const std::vector<std::string>& comments = {}) const;
    void write(const std::filesystem::path& path, const std::vector<std::string>& comments = {}) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// 17 significant digits; NaN becomes an empty cell.
std::string cell(double v);
std::string cell(bool v);

}  // namespace nle
