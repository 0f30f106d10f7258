#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "monotest/calibration.hpp"
#include "monotest/kernels.hpp"

namespace monotest {

enum class NoiseMode { Known, Rice };

struct TestConfig {
    double alpha = 0.05;
    double beta = 1.0;
    double L = 1.0;
    KernelId kernel = KernelId::Epanechnikov;
    Lambda0Source lambda0_source = Lambda0Source::Conservative;
    Regime regime = Regime::Practical;
    NoiseMode noise = NoiseMode::Known;
    double sigma = 0.3;                       // used when noise == Known
    std::optional<double> repetition_factor;  // regime default when empty
    std::optional<double> kappa;              // adaptive test only
    std::optional<double> grid_base;          // adaptive test only
    std::size_t mc_reps = 100;                // multiscale baselines only
    std::uint64_t seed = 0;
};

enum class Decision { Accept, Reject };

struct TestReport {
    std::string method;
    Decision decision = Decision::Accept;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
    double statistic = 0.0;  // T at the witness, or the multiscale statistic
    double critical = 0.0;   // threshold it was compared against
    std::uint64_t local_tests_run = 0;
    std::uint64_t estimator_evals = 0;
    std::uint64_t kernel_evals = 0;
    std::uint64_t outer_iterations = 0;
    std::uint64_t c_n = 0;
    std::uint64_t n_max = 0;
    std::uint64_t index_draws = 0;
    double bandwidth = 0.0;                  // h_n, or h of the rejecting fit
    std::optional<double> witness_bandwidth; // adaptive test: h at rejection
    double sigma_used = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double elapsed_s = 0.0;

    bool rejected() const { return decision == Decision::Reject; }
};

std::string decision_name(Decision d);

}  // namespace monotest
