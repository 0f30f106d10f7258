#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "monotest/config.hpp"
#include "monotest/rng.hpp"

namespace monotest {

struct PairBatch {
    std::size_t origin = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // first draw order, no repeats
    std::vector<std::size_t> indices;                         // origin and all partners, ascending
};

// Right partners use dyadic ranges k = 1..ceil(log2(n-i)), left partners
// k = 0..ceil(log2(i-1)); each block runs `repetitions` times.
PairBatch generate_index_pairs(std::size_t n, std::size_t origin, RandomStream& rng,
                               std::size_t repetitions);

// Adaptive scan: one bandwidth-selector fit per origin, order-1 estimates,
// noise term of the critical value only.
TestReport afomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng);

}  // namespace monotest
