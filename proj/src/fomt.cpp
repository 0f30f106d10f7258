#include "monotest/fomt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "monotest/calibration.hpp"

namespace monotest {

std::string decision_name(Decision d) { return d == Decision::Reject ? "reject" : "accept"; }

std::size_t ceil_log2(std::size_t m) {
    if (m == 0) throw std::invalid_argument("ceil_log2 of zero");
    std::size_t k = 0;
    while ((std::size_t{1} << k) < m) ++k;
    return k;
}

bool local_test(EstimateCache& cache, std::size_t i, std::size_t j, double q) {
    if (!(i >= 1 && i < j && j <= cache.n())) {
        throw std::invalid_argument("local test needs 1 <= i < j <= n");
    }
    return cache.get(i) - cache.get(j) >= q;
}

double resolve_sigma(std::span<const double> y, const TestConfig& cfg) {
    const double s = cfg.noise == NoiseMode::Rice ? std::sqrt(rice_variance(y)) : cfg.sigma;
    if (!(s > 0.0)) throw std::invalid_argument("noise level must be positive");
    return s;
}

namespace {

struct ScanSetup {
    std::size_t n;
    ConstantSet cs;
    double h;
    Budget budget;
};

ScanSetup prepare(std::span<const double> y, const TestConfig& cfg) {
    if (y.size() < 2) throw std::invalid_argument("need at least two observations");
    ScanSetup s{y.size(), {}, 0.0, {}};
    const KernelSpec kernel = kernel_constants(cfg.kernel, cfg.lambda0_source);
    s.cs = derive_constants(cfg.beta, cfg.L, resolve_sigma(y, cfg), kernel, cfg.regime);
    s.h = optimal_bandwidth(s.n, s.cs);
    s.budget = budget(s.n, cfg.alpha, s.h, BudgetVariant::Fomt);
    return s;
}

// Runs the local tests of one scan and fills the report; the visitor supplies
// the pairs.
class Scan {
public:
    Scan(std::span<const double> y, const TestConfig& cfg, const ScanSetup& s, TestReport& r)
        : cfg_(cfg), s_(s), report_(r), cache_(y, s.h, s.cs.order, s.cs.kernel) {}

    bool test(std::size_t i, std::size_t j) {
        const double q = critical_value(s_.n, cfg_.alpha, s_.h, i, j, s_.cs, s_.budget.n_max);
        ++report_.local_tests_run;
        if (!local_test(cache_, i, j, q)) return false;
        report_.decision = Decision::Reject;
        report_.witness = {i, j};
        report_.statistic = cache_.get(i) - cache_.get(j);
        report_.critical = q;
        return true;
    }

    void finish() {
        report_.estimator_evals = cache_.estimator_evals();
        report_.kernel_evals = cache_.kernel_evals();
    }

private:
    const TestConfig& cfg_;
    const ScanSetup& s_;
    TestReport& report_;
    EstimateCache cache_;
};

TestReport base_report(const char* method, const ScanSetup& s, const RandomStream& rng) {
    TestReport r;
    r.method = method;
    r.n = s.n;
    r.bandwidth = s.h;
    r.c_n = s.budget.c_n;
    r.n_max = s.budget.n_max;
    r.sigma_used = s.cs.sigma;
    r.seed = rng.seed();
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TestReport fomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng) {
    const auto start = std::chrono::steady_clock::now();
    const ScanSetup s = prepare(y, cfg);
    TestReport report = base_report("fomt", s, rng);
    const std::size_t reps = repetition_count(s.n, cfg.regime, cfg.repetition_factor);
    const std::uint64_t draws_before = rng.index_draws();
    Scan scan(y, cfg, s, report);
    const std::size_t n = s.n;

    bool rejected = false;
    for (std::uint64_t l = 0; l < s.budget.c_n && !rejected; ++l) {
        ++report.outer_iterations;
        const std::size_t origin = rng.uniform_index(n);
        if (origin <= n - 1) {
            const std::size_t room = n - origin;
            const std::size_t top = ceil_log2(room);
            for (std::size_t r = 0; r < reps && !rejected; ++r) {
                for (std::size_t k = 0; k <= top && !rejected; ++k) {
                    const std::size_t span = std::min<std::size_t>(std::size_t{1} << k, room);
                    const std::size_t jump = rng.uniform_index(span);
                    rejected = scan.test(origin, origin + jump);
                }
            }
        }
        if (origin >= 2 && !rejected) {
            const std::size_t room = origin - 1;
            const std::size_t top = ceil_log2(room);
            for (std::size_t r = 0; r < reps && !rejected; ++r) {
                for (std::size_t k = 0; k <= top && !rejected; ++k) {
                    const std::size_t span = std::min<std::size_t>(std::size_t{1} << k, room);
                    const std::size_t jump = rng.uniform_index(span);
                    rejected = scan.test(origin - jump, origin);
                }
            }
        }
    }
    scan.finish();
    report.index_draws = rng.index_draws() - draws_before;
    report.elapsed_s = seconds_since(start);
    return report;
}

TestReport sfomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng) {
    const auto start = std::chrono::steady_clock::now();
    const ScanSetup s = prepare(y, cfg);
    TestReport report = base_report("sfomt", s, rng);
    const std::uint64_t draws_before = rng.index_draws();
    Scan scan(y, cfg, s, report);
    const std::size_t n = s.n;

    bool rejected = false;
    for (std::uint64_t l = 0; l < s.budget.c_n && !rejected; ++l) {
        ++report.outer_iterations;
        const std::size_t origin = rng.uniform_index(n);
        if (origin <= n - 1) rejected = scan.test(origin, origin + 1);
        if (origin >= 2 && !rejected) rejected = scan.test(origin - 1, origin);
    }
    scan.finish();
    report.index_draws = rng.index_draws() - draws_before;
    report.elapsed_s = seconds_since(start);
    return report;
}

}  // namespace monotest
