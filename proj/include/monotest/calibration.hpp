#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "monotest/kernels.hpp"

namespace monotest {

// Theoretical uses the constants exactly as derived. Practical swaps in the
// finite-sample overrides: 0.58 W, 0.00175 C_rho, a fixed bandwidth rule,
// repetition constant 0.1 and grid base 1.6.
enum class Regime { Theoretical, Practical };

Regime parse_regime(std::string_view name);
std::string regime_name(Regime r);

inline constexpr double kPracticalVarianceFactor = 0.58;
inline constexpr double kPracticalRhoFactor = 0.00175;

struct ConstantSet {
    double beta = 1.0;
    double L = 1.0;
    double sigma = 1.0;
    Regime regime = Regime::Theoretical;
    KernelSpec kernel;
    int order = 0;           // LPE order the constants are built for
    int degree = 1;          // order + 1, stands in for ceil(beta)
    double lambda0 = 0.5;
    double c_star = 0.0;     // 8 K_max / lambda0
    double l1 = 0.0;
    double l2 = 0.0;
    double c_star_tilde = 0.0;
    double w_full = 0.0;     // variance constant before any regime factor
    double w = 0.0;          // the one used in critical values
    double q1 = 0.0;
    double q2 = 0.0;
    double c_h = 0.0;
    double c_beta = 0.0;
    double c_rho_full = 0.0;
    double c_rho = 0.0;      // the one used by the bandwidth selector
    double boundary_factor = 0.0;  // max(16 K_max / lambda0, 2)
};

// The order defaults to ceil(beta) - 1. Passing an order overrides it, as the
// adaptive test does with its fixed order-1 fits.
ConstantSet derive_constants(double beta, double L, double sigma, const KernelSpec& kernel,
                             Regime regime, std::optional<int> order = std::nullopt);

int order_for_beta(double beta);

// Clamped to [1/(2n), 0.5].
double optimal_bandwidth(std::size_t n, const ConstantSet& cs);

enum class BudgetVariant { Fomt, Afomt };

struct Budget {
    std::uint64_t c_n = 0;    // outer iterations
    std::uint64_t n_max = 0;  // bound on local tests, enters the critical value
};

Budget budget(std::size_t n, double alpha, double h_n, BudgetVariant variant);

// Noise part of the critical value for the pair (i, j), i < j.
double critical_noise_term(std::size_t n, double alpha, double h, std::size_t i, std::size_t j,
                           const ConstantSet& cs, std::uint64_t n_max);
// Bias allowance: zero when both points lie in [h, 1-h].
double boundary_term(std::size_t n, double h, std::size_t i, std::size_t j,
                     const ConstantSet& cs);
double critical_value(std::size_t n, double alpha, double h, std::size_t i, std::size_t j,
                      const ConstantSet& cs, std::uint64_t n_max);

bool is_interior(std::size_t n, double h, std::size_t i);

// Difference-based variance estimate sum (Y_{i+1} - Y_i)^2 / (2(n-1)).
double rice_variance(std::span<const double> y);

// Per-origin repetition count max(1, ceil(c log n)); c is 20 in the
// theoretical regime and 0.1 in the practical one unless given.
std::size_t repetition_count(std::size_t n, Regime regime,
                             std::optional<double> factor = std::nullopt);

}  // namespace monotest
