#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "monotest/calibration.hpp"
#include "monotest/kernels.hpp"
#include "monotest/lpe.hpp"

namespace monotest {

// h_m = base^(m-1)/n for m = 1..M with
// M = ceil(0.8 log_base n + 0.2 log_base log n). Entries are capped at 0.5 and
// the grid ends at the first capped entry, so it stays strictly increasing.
std::vector<double> bandwidth_grid(std::size_t n, double base);

double default_grid_base(Regime regime);

// Smallest admissible kappa is 1 + 2 K_max / sqrt(mu2); the default adds 0.01.
double minimal_kappa(const KernelSpec& kernel);
double default_kappa(const KernelSpec& kernel);

// Noise scale C_rho sqrt(log n / (n h)) of an order-`order` fit at bandwidth h.
double g2(std::size_t n, double h, double sigma, const KernelSpec& kernel, Regime regime,
          int order = 1);

// Max over the index set of |a_i - b_i|.
double sup_distance(std::span<const double> a, std::span<const double> b);

struct CalmCertificate {
    std::size_t k = 0;  // 1-based grid positions
    std::size_t m = 0;
    double distance = 0.0;
    double threshold = 0.0;
};

struct CalmFit {
    std::vector<std::size_t> indices;  // the set A, ascending
    std::vector<double> grid;
    std::vector<double> estimates;     // order-1 fits at h_selected, aligned with indices
    std::size_t m_bar = 0;             // 1-based
    double h_selected = 0.0;
    double kappa = 0.0;
    std::optional<CalmCertificate> certificate;  // present iff m_bar < M
    bool degenerate_stop = false;      // the very first comparison already failed
    std::uint64_t distance_evals = 0;
    std::uint64_t estimator_evals = 0;
    std::uint64_t kernel_evals = 0;

    std::size_t M() const { return grid.size(); }
    double estimate_at(std::size_t index) const;
};

struct CalmOptions {
    double kappa = 0.0;  // 0 picks default_kappa
    double grid_base = 1.6;
    Regime regime = Regime::Practical;
    Execution exec = Execution::Parallel;
};

// Walks the grid upwards and stops before the first bandwidth whose fit
// departs from some smaller-bandwidth fit by more than 4 kappa g2(k).
CalmFit calm_fit(std::span<const double> y, std::span<const std::size_t> indices,
                 const KernelSpec& kernel, double sigma, const CalmOptions& options);

}  // namespace monotest
