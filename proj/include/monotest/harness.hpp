#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monotest/config.hpp"
#include "monotest/lpe.hpp"
#include "monotest/signals.hpp"

namespace monotest {

enum class Method { Fomt, Sfomt, Afomt, Ds1, Ds2 };

Method parse_method(std::string_view name);
std::string method_name(Method m);

struct ExperimentPlan {
    std::vector<Method> methods;
    std::vector<SignalId> signals;
    std::vector<std::size_t> n_grid;
    double sigma = 0.3;
    double alpha = 0.05;
    std::size_t repetitions = 100;
    std::uint64_t master_seed = 1;
    Regime regime = Regime::Practical;
    std::filesystem::path output_dir;
    std::size_t jobs = 0;  // 0: OpenMP default
    TestConfig base;       // kernel, beta, L and the optional knobs
};

// Per-repetition seed: hash of (master, method, signal, n, repetition).
std::uint64_t run_seed(std::uint64_t master, Method method, SignalId signal, std::size_t n,
                       std::size_t repetition);

// Dispatches one test on data. Multiscale methods take the critical value
// from `ds_critical` when it is finite and simulate one otherwise.
TestReport run_method(Method method, std::span<const double> y, const TestConfig& cfg,
                      double ds_critical);

struct RunRecord {
    bool rejected = false;
    bool failed = false;
    std::string error;
    double seconds = 0.0;
    std::uint64_t local_tests = 0;
    std::uint64_t estimator_evals = 0;
    std::uint64_t kernel_evals = 0;
};

struct ResultRow {
    std::string method;
    std::string signal;
    std::size_t n = 0;
    double rejection_rate = 0.0;
    double median_s = 0.0;
    double q25_s = 0.0;
    double q75_s = 0.0;
    double local_tests_median = 0.0;
    double estimator_evals_median = 0.0;
    std::size_t errors = 0;
};

// All repetitions of one (method, signal, n) cell, indexed by repetition.
std::vector<RunRecord> run_cell(const ExperimentPlan& plan, Method method, SignalId signal,
                                std::size_t n, Execution exec = Execution::Parallel);

ResultRow summarize(Method method, SignalId signal, std::size_t n,
                    const std::vector<RunRecord>& runs);

std::vector<ResultRow> run_power_experiment(const ExperimentPlan& plan,
                                            Execution exec = Execution::Parallel);
// Same cells; the rows carry operation counters for growth checks.
std::vector<ResultRow> run_runtime_benchmark(const ExperimentPlan& plan,
                                             Execution exec = Execution::Parallel);

// Linear-interpolation quantile of unsorted values, p in [0, 1].
double quantile(std::vector<double> values, double p);

enum class OutputFormat { Csv, Json, Plotdat };
OutputFormat parse_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "method,signal,n,rejection_rate,median_s,q25_s,q75_s,local_tests_median";

// Csv and Json write to `target`; Plotdat writes one <method>_<signal>.dat per
// pair into the directory `target`. Returns the files written.
std::vector<std::filesystem::path> emit(const std::vector<ResultRow>& rows, OutputFormat format,
                                        const std::filesystem::path& target);

std::vector<ResultRow> parse_results_csv(const std::filesystem::path& path);

}  // namespace monotest
