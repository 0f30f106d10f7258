#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace monotest {

// Function values on the grid j/m, j = 1..m, with optional derivatives.
struct GridFunction {
    std::vector<double> values;
    std::optional<std::vector<double>> derivatives;

    std::size_t m() const { return values.size(); }
};

// Smallest fraction of grid points at which f must move by more than gamma
// to become nondecreasing.
double exceedance0_grid(std::span<const double> values, double gamma);

// Fraction of grid points with f' <= -gamma.
double exceedance1_grid(const GridFunction& gf, double gamma);

// 1-based indices a that are right-heavy (some b > a has at least (b-a)/2 of
// the cells in (a, b] where f(a) - f >= gamma) or left-heavy (mirror image).
std::vector<std::size_t> heavy_points(std::span<const double> values, double gamma);

}  // namespace monotest
