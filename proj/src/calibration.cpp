#include "monotest/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace monotest {

Regime parse_regime(std::string_view name) {
    if (name == "theoretical") return Regime::Theoretical;
    if (name == "practical") return Regime::Practical;
    throw std::invalid_argument("unknown regime: " + std::string(name));
}

std::string regime_name(Regime r) {
    return r == Regime::Theoretical ? "theoretical" : "practical";
}

int order_for_beta(double beta) {
    if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("beta must lie in (0, 2]");
    return static_cast<int>(std::ceil(beta)) - 1;
}

ConstantSet derive_constants(double beta, double L, double sigma, const KernelSpec& kernel,
                             Regime regime, std::optional<int> order) {
    const int base_order = order_for_beta(beta);
    if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (order && *order != 0 && *order != 1) throw std::invalid_argument("order must be 0 or 1");

    ConstantSet cs;
    cs.beta = beta;
    cs.L = L;
    cs.sigma = sigma;
    cs.regime = regime;
    cs.kernel = kernel;
    cs.order = order.value_or(base_order);
    cs.degree = cs.order + 1;
    cs.lambda0 = kernel.lambda0(cs.order);

    const double e_sqrt = std::sqrt(std::numbers::e);
    const double p = cs.degree;
    cs.c_star = 8.0 * kernel.k_max / cs.lambda0;
    cs.l1 = e_sqrt * (kernel.lipschitz + kernel.k_max);
    cs.l2 = p * (2.0 * kernel.k_max + kernel.lipschitz);
    cs.c_star_tilde = cs.l1 / (8.0 * cs.l2) + e_sqrt * kernel.k_max / cs.lambda0;
    cs.w_full = std::max(4.0 * cs.c_star * cs.c_star, 4.0 * cs.c_star_tilde * cs.c_star_tilde);
    cs.w = regime == Regime::Practical ? kPracticalVarianceFactor * cs.w_full : cs.w_full;

    cs.q1 = cs.c_star * L;  // divided by (degree-1)!, which is 1 for both orders
    cs.q2 = sigma * sigma * 16.0 * p / (cs.lambda0 * cs.lambda0) * kernel.mu2;
    cs.c_h = std::pow(cs.q2 / (4.0 * cs.q1 * cs.q1 * beta), 1.0 / (2.0 * beta + 1.0));

    cs.boundary_factor = std::max(16.0 * kernel.k_max / cs.lambda0, 2.0);
    const double spread = cs.w / std::pow(cs.c_h, 2.0 * beta + 1.0);
    if (cs.order == 0) {
        cs.c_beta = (cs.boundary_factor + 4.0) * L +
                    sigma * (std::sqrt(4.0 * spread) + std::sqrt(6.0 * spread));
    } else {
        cs.c_beta = 4.0 * L + 16.0 * cs.l2 * sigma / cs.lambda0 * std::sqrt(4.0 * spread);
    }

    cs.c_rho_full = std::sqrt(32.0 * sigma * sigma * kernel.mu2 / (cs.lambda0 * cs.lambda0));
    cs.c_rho = regime == Regime::Practical ? kPracticalRhoFactor * cs.c_rho_full : cs.c_rho_full;
    return cs;
}

double optimal_bandwidth(std::size_t n, const ConstantSet& cs) {
    if (n < 2) throw std::invalid_argument("optimal_bandwidth needs n >= 2");
    const double nd = static_cast<double>(n);
    const double ratio = std::log(nd) / nd;
    const double h = cs.regime == Regime::Practical
                         ? 0.3 * std::cbrt(ratio)
                         : cs.c_h * std::pow(ratio, 1.0 / (2.0 * cs.beta + 1.0));
    return std::clamp(h, 0.5 / nd, 0.5);
}

Budget budget(std::size_t n, double alpha, double h_n, BudgetVariant variant) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (n < 2) throw std::invalid_argument("budget needs n >= 2");
    const double nd = static_cast<double>(n);
    const double scale = -2.0 * std::log(alpha / 2.0);
    Budget b;
    if (variant == BudgetVariant::Fomt) {
        if (!(h_n > 0.0)) throw std::invalid_argument("bandwidth must be positive");
        b.c_n = static_cast<std::uint64_t>(std::ceil(scale / h_n));
    } else {
        b.c_n = static_cast<std::uint64_t>(std::ceil(scale * nd / std::log(nd)));
    }
    const double log_n = std::log(nd);
    b.n_max = static_cast<std::uint64_t>(
        std::ceil(40.0 / std::numbers::ln2 * static_cast<double>(b.c_n) * log_n * log_n));
    return b;
}

bool is_interior(std::size_t n, double h, std::size_t i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    return x >= h && x <= 1.0 - h;
}

namespace {
void check_pair(std::size_t n, std::size_t i, std::size_t j) {
    if (!(i >= 1 && i < j && j <= n)) throw std::invalid_argument("pair must satisfy 1 <= i < j <= n");
}
}  // namespace

double critical_noise_term(std::size_t n, double alpha, double h, std::size_t i, std::size_t j,
                           const ConstantSet& cs, std::uint64_t n_max) {
    check_pair(n, i, j);
    const double nd = static_cast<double>(n);
    const double gap = static_cast<double>(j - i) / nd;
    const double reach = std::min(8.0 * cs.l2 / cs.lambda0 * gap, h);
    const double level = -2.0 * std::log(alpha / static_cast<double>(n_max));
    return cs.sigma * std::sqrt(level * cs.w) / std::sqrt(nd) * std::pow(h, -1.5) * reach;
}

double boundary_term(std::size_t n, double h, std::size_t i, std::size_t j,
                     const ConstantSet& cs) {
    check_pair(n, i, j);
    if (is_interior(n, h, i) && is_interior(n, h, j)) return 0.0;
    return cs.boundary_factor * cs.L * std::pow(h, cs.beta);
}

double critical_value(std::size_t n, double alpha, double h, std::size_t i, std::size_t j,
                      const ConstantSet& cs, std::uint64_t n_max) {
    return critical_noise_term(n, alpha, h, i, j, cs, n_max) + boundary_term(n, h, i, j, cs);
}

double rice_variance(std::span<const double> y) {
    if (y.size() < 2) throw std::invalid_argument("rice_variance needs n >= 2");
    double sum = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double d = y[i] - y[i - 1];
        sum += d * d;
    }
    return sum / (2.0 * static_cast<double>(y.size() - 1));
}

std::size_t repetition_count(std::size_t n, Regime regime, std::optional<double> factor) {
    const double c = factor.value_or(regime == Regime::Theoretical ? 20.0 : 0.1);
    if (!(c > 0.0)) throw std::invalid_argument("repetition factor must be positive");
    const double reps = std::ceil(c * std::log(static_cast<double>(n)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(reps));
}

}  // namespace monotest
