#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ntn {

using Cell = std::variant<std::string, std::int64_t, double>;

/// Tidy result rows with a fixed column order and `#`-prefixed metadata lines.
class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    void add_metadata(std::string key, std::string value);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
    const std::string& text(std::size_t row, const std::string& column) const;

    /// Header plus rows, without metadata.
    std::string body() const;
    std::string to_csv() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

std::string format_cell(const Cell& cell);

} // namespace ntn
