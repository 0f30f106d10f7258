#pragma once

#include <filesystem>
#include <vector>

namespace monotest {

// Numeric CSV rows. A first line that does not parse as numbers is taken as a
// header and skipped; blank lines are ignored. All rows must have the same
// number of columns.
std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path);

// Observations from one column (y) or two columns (x, y). In the two-column
// form x must equal i/n in row i to within 1e-9.
std::vector<double> read_observations(const std::filesystem::path& path);

}  // namespace monotest
