#include "monotest/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace monotest {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::optional<std::vector<double>> parse_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string t = trim(cell);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
        out.push_back(v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto row = parse_row(line);
        if (!row) {
            if (rows.empty() && line_no == 1) continue;
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": not a numeric row");
        }
        if (!rows.empty() && row->size() != rows.front().size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": column count changes");
        }
        rows.push_back(std::move(*row));
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");
    return rows;
}

std::vector<double> read_observations(const std::filesystem::path& path) {
    const auto rows = read_numeric_table(path);
    const std::size_t cols = rows.front().size();
    if (cols != 1 && cols != 2) throw std::runtime_error("expected one or two columns");
    std::vector<double> y;
    y.reserve(rows.size());
    const double n = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (cols == 2) {
            const double expected = static_cast<double>(i + 1) / n;
            if (std::fabs(rows[i][0] - expected) > 1e-9) {
                throw std::runtime_error("x column is not the grid i/n at row " +
                                         std::to_string(i + 1));
            }
        }
        y.push_back(rows[i].back());
    }
    return y;
}

}  // namespace monotest
