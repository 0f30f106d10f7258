#include "monotest/multiscale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "monotest/fomt.hpp"
#include "monotest/rng.hpp"

namespace monotest {

MultiscaleVariant parse_multiscale(std::string_view name) {
    if (name == "ds1") return MultiscaleVariant::Ds1;
    if (name == "ds2") return MultiscaleVariant::Ds2;
    throw std::invalid_argument("unknown multiscale variant: " + std::string(name));
}

std::string multiscale_name(MultiscaleVariant v) {
    return v == MultiscaleVariant::Ds1 ? "ds1" : "ds2";
}

double scale_calibration(double h) { return 2.0 * std::sqrt(std::log(1.0 / (2.0 * h))); }

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

struct ScaleBest {
    double value = kNone;
    std::size_t s = 0;  // grid indices
    std::size_t t = 0;
    std::uint64_t kernel_evals = 0;
};

// Standardized kernel sum at grid index c with half-width j (in index units).
double standardized_sum(MultiscaleVariant variant, std::span<const double> y, double sigma,
                        std::size_t c, std::size_t j, std::uint64_t& evals) {
    double num = 0.0;
    double sq = 0.0;
    const double jd = static_cast<double>(j);
    for (std::size_t l = c - j + 1; l <= c + j - 1; ++l) {
        const double u = (static_cast<double>(l) - static_cast<double>(c)) / jd;
        const double tri = 1.0 - std::fabs(u);
        const double kv = variant == MultiscaleVariant::Ds1 ? tri : u * tri;
        num += kv * y[l - 1];
        sq += kv * kv;
    }
    evals += 2 * j - 1;
    if (sq == 0.0) return 0.0;  // ds2 at j = 1: the kernel vanishes on the only point
    return num / (sigma * std::sqrt(sq));
}

// Lattice points c = k j with c >= j and c + j <= n.
ScaleBest best_at_scale(MultiscaleVariant variant, std::span<const double> y, double sigma,
                        std::size_t j) {
    const std::size_t n = y.size();
    ScaleBest best;
    const std::size_t points = n / j >= 1 ? n / j - 1 : 0;
    if (variant == MultiscaleVariant::Ds1) {
        double left_max = kNone;
        std::size_t left_arg = 0;
        for (std::size_t k = 1; k <= points; ++k) {
            const std::size_t c = k * j;
            const double psi = standardized_sum(variant, y, sigma, c, j, best.kernel_evals);
            if (left_max != kNone && left_max - psi > best.value) {
                best.value = left_max - psi;
                best.s = left_arg;
                best.t = c;
            }
            if (psi > left_max) {
                left_max = psi;
                left_arg = c;
            }
        }
    } else {
        for (std::size_t k = 1; k <= points; ++k) {
            const std::size_t c = k * j;
            const double v = -standardized_sum(variant, y, sigma, c, j, best.kernel_evals);
            if (v > best.value) {
                best.value = v;
                best.s = best.t = c;
            }
        }
    }
    return best;
}

}  // namespace

MultiscaleStat ds_statistic(MultiscaleVariant variant, std::span<const double> y, double sigma,
                            Execution exec) {
    const std::size_t n = y.size();
    if (n < 4) throw std::invalid_argument("multiscale statistic needs n >= 4");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const std::size_t scales = n / 2;
    std::vector<ScaleBest> per_scale(scales);
    const auto count = static_cast<std::ptrdiff_t>(scales);
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t a = 0; a < count; ++a) {
            per_scale[a] = best_at_scale(variant, y, sigma, static_cast<std::size_t>(a) + 1);
        }
    } else {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t a = 0; a < count; ++a) {
            per_scale[a] = best_at_scale(variant, y, sigma, static_cast<std::size_t>(a) + 1);
        }
    }

    MultiscaleStat out;
    out.variant = variant;
    out.value = kNone;
    const double nd = static_cast<double>(n);
    for (std::size_t a = 0; a < scales; ++a) {
        const ScaleBest& b = per_scale[a];
        out.kernel_evals += b.kernel_evals;
        if (b.value == kNone) continue;
        const double h = static_cast<double>(a + 1) / nd;
        const double v = b.value - scale_calibration(h);
        if (v > out.value) {
            out.value = v;
            out.h = h;
            out.s = static_cast<double>(b.s) / nd;
            out.t = static_cast<double>(b.t) / nd;
        }
    }
    if (out.value == kNone) throw std::invalid_argument("no admissible scale");
    return out;
}

std::vector<double> mc_statistics(MultiscaleVariant variant, std::size_t n, double sigma,
                                  std::size_t reps, std::uint64_t seed, Execution exec) {
    if (reps < 1) throw std::invalid_argument("need at least one repetition");
    std::vector<double> stats(reps);
    auto one = [&](std::size_t r) {
        RandomStream rng(derive_seed(seed, {r}));
        std::vector<double> noise(n);
        for (double& e : noise) e = sigma * rng.standard_normal();
        return ds_statistic(variant, noise, sigma, Execution::Serial).value;
    };
    const auto count = static_cast<std::ptrdiff_t>(reps);
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t r = 0; r < count; ++r) stats[r] = one(static_cast<std::size_t>(r));
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t r = 0; r < count; ++r) stats[r] = one(static_cast<std::size_t>(r));
    }
    std::sort(stats.begin(), stats.end());
    return stats;
}

std::size_t quantile_rank(double alpha, std::size_t reps) {
    const double position = std::ceil((1.0 - alpha) * static_cast<double>(reps) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(position), 1, reps);
}

double mc_critical(MultiscaleVariant variant, std::size_t n, double sigma, double alpha,
                   std::size_t reps, std::uint64_t seed, Execution exec) {
    if (reps < kMinMonteCarloReps) {
        throw std::invalid_argument("critical value needs at least 50 noise samples");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const std::vector<double> stats = mc_statistics(variant, n, sigma, reps, seed, exec);
    return stats[quantile_rank(alpha, reps) - 1];
}

TestReport ds_run(MultiscaleVariant variant, std::span<const double> y, const TestConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const double sigma = resolve_sigma(y, cfg);
    TestReport report;
    report.method = multiscale_name(variant);
    report.n = y.size();
    report.sigma_used = sigma;
    report.seed = cfg.seed;
    report.critical = mc_critical(variant, y.size(), sigma, cfg.alpha, cfg.mc_reps,
                                  derive_seed(cfg.seed, {hash_label("mc-critical")}));
    const MultiscaleStat stat = ds_statistic(variant, y, sigma);
    report.statistic = stat.value;
    report.kernel_evals = stat.kernel_evals;
    report.bandwidth = stat.h;
    if (stat.value > report.critical) {
        report.decision = Decision::Reject;
        // Only the two-location statistic has a pair to report.
        if (variant == MultiscaleVariant::Ds1) {
            const auto nd = static_cast<double>(y.size());
            report.witness = {static_cast<std::size_t>(std::lround(stat.s * nd)),
                              static_cast<std::size_t>(std::lround(stat.t * nd))};
        }
    }
    report.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace monotest
