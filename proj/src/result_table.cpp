#include "ntn/result_table.hpp"

#include "ntn/errors.hpp"

#include <fmt/format.h>

#include <fstream>

namespace ntn {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw DomainError("result table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw DomainError(fmt::format("row has {} cells, table has {} columns", row.size(), columns_.size()));
    rows_.push_back(std::move(row));
}

void ResultTable::add_metadata(std::string key, std::string value) {
    metadata_.emplace_back(std::move(key), std::move(value));
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw DomainError(fmt::format("no column named '{}'", name));
}

double ResultTable::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw DomainError(fmt::format("column '{}' is not numeric", column));
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    throw DomainError(fmt::format("column '{}' is not text", column));
}

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return fmt::format("{:.9g}", v);
            else return fmt::format("{}", v);
        },
        cell);
}

std::string ResultTable::body() const {
    std::string out = fmt::format("{}\n", fmt::join(columns_, ","));
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (const auto& [k, v] : metadata_) out += fmt::format("# {}: {}\n", k, v);
    return out + body();
}

void ResultTable::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ScenarioError(fmt::format("cannot open '{}' for writing", path.string()));
    f << to_csv();
    if (!f) throw ScenarioError(fmt::format("failed writing '{}'", path.string()));
}

} // namespace ntn
