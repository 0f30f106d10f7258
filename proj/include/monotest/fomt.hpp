#pragma once

#include <cstddef>
#include <span>

#include "monotest/config.hpp"
#include "monotest/lpe.hpp"
#include "monotest/rng.hpp"

namespace monotest {

// True iff fhat(x_i) - fhat(x_j) >= q. Requires 1 <= i < j <= n.
bool local_test(EstimateCache& cache, std::size_t i, std::size_t j, double q);

// Noise level from the config: the given sigma, or the Rice estimate.
double resolve_sigma(std::span<const double> y, const TestConfig& cfg);

// Randomized scan with dyadic partner searches to both sides of each origin.
// Stops at the first local rejection.
TestReport fomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng);

// Adjacent pairs only: (I, I+1) and (I-1, I) per origin.
TestReport sfomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng);

std::size_t ceil_log2(std::size_t m);

}  // namespace monotest
