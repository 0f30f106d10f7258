#include "monotest/exceedance.hpp"

#include <algorithm>
#include <stdexcept>

namespace monotest {

double exceedance0_grid(std::span<const double> values, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const std::size_t m = values.size();
    if (m == 0) throw std::invalid_argument("empty grid function");

    // Candidate levels for g; a point is kept when its band [f-gamma, f+gamma]
    // contains the current level.
    std::vector<double> levels;
    levels.reserve(2 * m);
    for (double f : values) {
        levels.push_back(f - gamma);
        levels.push_back(f + gamma);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // best[v]: most kept points so far with g ending at or below levels[v].
    std::vector<std::size_t> best(levels.size(), 0);
    for (double f : values) {
        const double lo = f - gamma;
        const double hi = f + gamma;
        std::size_t running = 0;
        for (std::size_t v = 0; v < levels.size(); ++v) {
            const std::size_t here = best[v] + ((levels[v] >= lo && levels[v] <= hi) ? 1 : 0);
            running = std::max(running, here);
            best[v] = running;
        }
    }
    const std::size_t kept = best.back();
    return static_cast<double>(m - kept) / static_cast<double>(m);
}

double exceedance1_grid(const GridFunction& gf, double gamma) {
    if (!gf.derivatives) throw std::invalid_argument("derivative values required");
    const auto& d = *gf.derivatives;
    if (d.empty()) throw std::invalid_argument("empty grid function");
    const auto count = std::count_if(d.begin(), d.end(), [&](double v) { return v <= -gamma; });
    return static_cast<double>(count) / static_cast<double>(d.size());
}

std::vector<std::size_t> heavy_points(std::span<const double> values, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const std::size_t m = values.size();
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < m; ++a) {
        bool heavy = false;
        std::size_t hits = 0;
        for (std::size_t b = a + 1; b < m && !heavy; ++b) {
            if (values[a] - values[b] >= gamma) ++hits;
            heavy = 2 * hits >= b - a;
        }
        hits = 0;
        for (std::size_t b = a; b-- > 0 && !heavy;) {
            if (values[b] - values[a] >= gamma) ++hits;
            heavy = 2 * hits >= a - b;
        }
        if (heavy) out.push_back(a + 1);
    }
    return out;
}

}  // namespace monotest
