#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monotest/config.hpp"
#include "monotest/lpe.hpp"

namespace monotest {

// Multiscale baselines over the scale ladder h = 1/n, ..., floor(n/2)/n with
// calibration C(h) = 2 sqrt(log(1/(2h))). Both are oriented so that large
// values indicate a decrease.
//   Ds1: largest standardized triangular-kernel mean at s minus that at t,
//        s < t on the lattice {kh} within [h, 1-h].
//   Ds2: largest standardized negative slope sum with kernel u(1-|u|).
enum class MultiscaleVariant { Ds1, Ds2 };

MultiscaleVariant parse_multiscale(std::string_view name);
std::string multiscale_name(MultiscaleVariant v);

struct MultiscaleStat {
    MultiscaleVariant variant = MultiscaleVariant::Ds1;
    double value = 0.0;
    double h = 0.0;  // scale of the maximum
    double s = 0.0;  // ds1: left location; ds2: the location
    double t = 0.0;  // ds1: right location; ds2: equals s
    std::uint64_t kernel_evals = 0;
};

double scale_calibration(double h);

MultiscaleStat ds_statistic(MultiscaleVariant variant, std::span<const double> y, double sigma,
                            Execution exec = Execution::Parallel);

inline constexpr std::size_t kMinMonteCarloReps = 50;

// Statistics of R pure-noise samples, sample r seeded derive_seed(seed, {r}),
// sorted ascending.
std::vector<double> mc_statistics(MultiscaleVariant variant, std::size_t n, double sigma,
                                  std::size_t reps, std::uint64_t seed,
                                  Execution exec = Execution::Parallel);

// 1-based position ceil((1-alpha) R) of the critical value in the sorted sample.
std::size_t quantile_rank(double alpha, std::size_t reps);

// The ceil((1-alpha) R)-th smallest statistic over R pure-noise samples.
double mc_critical(MultiscaleVariant variant, std::size_t n, double sigma, double alpha,
                   std::size_t reps, std::uint64_t seed, Execution exec = Execution::Parallel);

// Rejects when the statistic exceeds the simulated critical value.
TestReport ds_run(MultiscaleVariant variant, std::span<const double> y, const TestConfig& cfg);

}  // namespace monotest
