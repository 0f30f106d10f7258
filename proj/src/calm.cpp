#include "monotest/calm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monotest {

std::vector<double> bandwidth_grid(std::size_t n, double base) {
    if (n < 3) throw std::invalid_argument("bandwidth grid needs n >= 3");
    if (!(base > 1.0)) throw std::invalid_argument("grid base must exceed 1");
    const double nd = static_cast<double>(n);
    const double lb = std::log(base);
    const double raw = 0.8 * std::log(nd) / lb + 0.2 * std::log(std::log(nd)) / lb;
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(raw)));
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t m = 1; m <= count; ++m) {
        const double h = std::pow(base, static_cast<double>(m - 1)) / nd;
        if (h >= 0.5) {
            grid.push_back(0.5);
            break;
        }
        grid.push_back(h);
    }
    return grid;
}

double default_grid_base(Regime regime) { return regime == Regime::Practical ? 1.6 : 4.0; }

double minimal_kappa(const KernelSpec& kernel) {
    return 1.0 + 2.0 * kernel.k_max / std::sqrt(kernel.mu2);
}

double default_kappa(const KernelSpec& kernel) { return minimal_kappa(kernel) + 0.01; }

double g2(std::size_t n, double h, double sigma, const KernelSpec& kernel, Regime regime,
          int order) {
    const double lambda0 = kernel.lambda0(order);
    double c_rho = std::sqrt(32.0 * sigma * sigma * kernel.mu2 / (lambda0 * lambda0));
    if (regime == Regime::Practical) c_rho *= kPracticalRhoFactor;
    const double nd = static_cast<double>(n);
    return c_rho * std::sqrt(std::log(nd) / (nd * h));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("distance over different index sets");
    double d = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) d = std::max(d, std::fabs(a[t] - b[t]));
    return d;
}

double CalmFit::estimate_at(std::size_t index) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), index);
    if (it == indices.end() || *it != index) throw std::out_of_range("index not in fitted set");
    return estimates[static_cast<std::size_t>(it - indices.begin())];
}

CalmFit calm_fit(std::span<const double> y, std::span<const std::size_t> indices,
                 const KernelSpec& kernel, double sigma, const CalmOptions& options) {
    if (indices.empty()) throw std::invalid_argument("CALM needs a nonempty index set");
    const std::size_t n = y.size();
    CalmFit fit;
    fit.indices.assign(indices.begin(), indices.end());
    std::sort(fit.indices.begin(), fit.indices.end());
    fit.indices.erase(std::unique(fit.indices.begin(), fit.indices.end()), fit.indices.end());
    if (fit.indices.front() < 1 || fit.indices.back() > n) {
        throw std::invalid_argument("index outside [1, n]");
    }
    fit.kappa = options.kappa > 0.0 ? options.kappa : default_kappa(kernel);
    if (!(fit.kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
    fit.grid = bandwidth_grid(n, options.grid_base);

    const std::size_t M = fit.grid.size();
    std::vector<std::vector<double>> fits;
    fits.reserve(M);
    std::vector<double> noise(M);
    for (std::size_t m = 0; m < M; ++m) {
        noise[m] = g2(n, fit.grid[m], sigma, kernel, options.regime, 1);
    }

    fit.m_bar = M;
    for (std::size_t m = 0; m < M && fit.m_bar == M; ++m) {
        fits.push_back(estimate_indices(y, fit.grid[m], 1, kernel, fit.indices, options.exec,
                                        &fit.kernel_evals));
        fit.estimator_evals += fit.indices.size();
        for (std::size_t k = 0; k < m; ++k) {
            ++fit.distance_evals;
            const double d = sup_distance(fits[k], fits[m]);
            const double threshold = 4.0 * fit.kappa * noise[k];
            if (d > threshold) {
                fit.certificate = CalmCertificate{k + 1, m + 1, d, threshold};
                fit.m_bar = m;  // 1-based index of the previous grid point
                break;
            }
        }
    }
    if (fit.m_bar == 0) fit.m_bar = 1;  // unreachable: m = 1 has nothing to compare
    fit.degenerate_stop = fit.certificate && fit.m_bar == 1;
    fit.h_selected = fit.grid[fit.m_bar - 1];
    fit.estimates = std::move(fits[fit.m_bar - 1]);
    return fit;
}

}  // namespace monotest
