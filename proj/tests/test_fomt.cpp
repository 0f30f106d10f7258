#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "monotest/calibration.hpp"
#include "monotest/fomt.hpp"
#include "monotest/signals.hpp"

using namespace monotest;

namespace {

std::vector<double> tabulate(std::size_t n, const std::function<double(double)>& f) {
    std::vector<double> y(n);
    for (std::size_t i = 1; i <= n; ++i) y[i - 1] = f(static_cast<double>(i) / n);
    return y;
}

TestConfig config(Regime regime, double sigma, double L = 1.0, double beta = 1.0) {
    TestConfig cfg;
    cfg.regime = regime;
    cfg.sigma = sigma;
    cfg.L = L;
    cfg.beta = beta;
    return cfg;
}

// Checks every pair of the grid against its own critical value.
std::size_t noiseless_rejections(const std::vector<double>& y, const TestConfig& cfg) {
    const std::size_t n = y.size();
    const KernelSpec k = kernel_constants(cfg.kernel, cfg.lambda0_source);
    const ConstantSet cs = derive_constants(cfg.beta, cfg.L, cfg.sigma, k, cfg.regime);
    const double h = optimal_bandwidth(n, cs);
    const Budget b = budget(n, cfg.alpha, h, BudgetVariant::Fomt);
    EstimateCache cache(y, h, cs.order, cs.kernel);
    std::size_t bad = 0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            bad += local_test(cache, i, j, critical_value(n, cfg.alpha, h, i, j, cs, b.n_max));
        }
    }
    return bad;
}

}  // namespace

TEST(LocalTest, IncreasingNoiselessNeverRejects) {
    for (Regime regime : {Regime::Theoretical, Regime::Practical}) {
        const auto lin = tabulate(200, [](double x) { return x; });
        const auto quad = tabulate(200, [](double x) { return x * x; });
        const auto step = tabulate(200, [](double x) { return x < 0.5 ? 0.0 : 0.5; });
        EXPECT_EQ(noiseless_rejections(lin, config(regime, 0.3, 1.0)), 0u);
        EXPECT_EQ(noiseless_rejections(quad, config(regime, 0.3, 2.0)), 0u);
        EXPECT_EQ(noiseless_rejections(step, config(regime, 0.3, 1.0)), 0u);
    }
}

TEST(LocalTest, PairOrderIsChecked) {
    const std::vector<double> y(50, 0.0);
    EstimateCache cache(y, 0.1, 0, kernel_constants(KernelId::Epanechnikov));
    EXPECT_THROW(local_test(cache, 5, 5, 0.0), std::invalid_argument);
    EXPECT_THROW(local_test(cache, 6, 5, 0.0), std::invalid_argument);
    EXPECT_THROW(local_test(cache, 0, 5, 0.0), std::invalid_argument);
    EXPECT_THROW(local_test(cache, 5, 51, 0.0), std::invalid_argument);
    EXPECT_TRUE(local_test(cache, 5, 6, 0.0));
    EXPECT_FALSE(local_test(cache, 5, 6, 1e-9));
}

TEST(LocalTest, DecreasingPairRejects) {
    const auto y = tabulate(800, [](double x) { return -x; });
    const TestConfig cfg = config(Regime::Practical, 0.01);
    const KernelSpec k = kernel_constants(cfg.kernel);
    const ConstantSet cs = derive_constants(1.0, 1.0, 0.01, k, Regime::Practical);
    const double h = optimal_bandwidth(800, cs);
    const Budget b = budget(800, 0.05, h, BudgetVariant::Fomt);
    EstimateCache cache(y, h, cs.order, cs.kernel);
    EXPECT_TRUE(local_test(cache, 200, 600, critical_value(800, 0.05, h, 200, 600, cs, b.n_max)));
}

TEST(Fomt, NullScanRunsToBudget) {
    const Sample s = generate_sample(Signal(SignalId::F0), 400, 0.3, 11);
    RandomStream rng(5);
    const TestReport r = fomt_run(s.y, config(Regime::Practical, 0.3), rng);
    EXPECT_FALSE(r.rejected());
    EXPECT_FALSE(r.witness.has_value());
    EXPECT_EQ(r.outer_iterations, r.c_n);
    EXPECT_EQ(r.index_draws, r.outer_iterations + r.local_tests_run);
    EXPECT_LE(r.estimator_evals, 400u);
    EXPECT_EQ(r.method, "fomt");
    EXPECT_EQ(r.seed, 5u);
}

TEST(Fomt, SameSeedSameReport) {
    const Sample s = generate_sample(Signal(SignalId::F3), 400, 0.05, 2);
    for (int t = 0; t < 3; ++t) {
        RandomStream a(99), b(99);
        const TestReport ra = fomt_run(s.y, config(Regime::Practical, 0.05), a);
        const TestReport rb = fomt_run(s.y, config(Regime::Practical, 0.05), b);
        EXPECT_EQ(ra.decision, rb.decision);
        EXPECT_EQ(ra.witness, rb.witness);
        EXPECT_EQ(ra.local_tests_run, rb.local_tests_run);
        EXPECT_EQ(ra.estimator_evals, rb.estimator_evals);
        EXPECT_EQ(ra.statistic, rb.statistic);
    }
}

TEST(Fomt, StopsAtWitness) {
    const auto y = tabulate(800, [](double x) { return -x; });
    const TestConfig cfg = config(Regime::Practical, 0.01);
    RandomStream rng(3);
    const TestReport r = fomt_run(y, cfg, rng);
    ASSERT_TRUE(r.rejected());
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_LT(r.outer_iterations, r.c_n);

    const auto [i, j] = *r.witness;
    const ConstantSet cs =
        derive_constants(1.0, 1.0, 0.01, kernel_constants(cfg.kernel), Regime::Practical);
    EstimateCache fresh(y, r.bandwidth, cs.order, cs.kernel);
    const double q = critical_value(800, 0.05, r.bandwidth, i, j, cs, r.n_max);
    EXPECT_DOUBLE_EQ(r.critical, q);
    EXPECT_DOUBLE_EQ(r.statistic, fresh.get(i) - fresh.get(j));
    EXPECT_GE(r.statistic, r.critical);
}

TEST(Fomt, TheoreticalNullLevel) {
    std::size_t rejections = 0;
    const std::size_t seeds = 400;
    for (std::size_t s = 0; s < seeds; ++s) {
        const Sample smp = generate_sample(Signal(SignalId::F0), 200, 1.0, 1000 + s);
        RandomStream rng(derive_seed(77, {s}));
        rejections += fomt_run(smp.y, config(Regime::Theoretical, 1.0), rng).rejected();
    }
    // 0.05 plus a generous binomial margin.
    EXPECT_LE(static_cast<double>(rejections) / seeds, 0.083);
}

namespace {
void check_local_test_budget(Regime regime) {
    for (std::size_t n : {50u, 200u, 777u}) {
        const Sample smp = generate_sample(Signal(SignalId::F4), n, 0.3, n);
        RandomStream rng(n + 1);
        const TestReport r = fomt_run(smp.y, config(regime, 0.3), rng);
        const std::size_t reps = repetition_count(n, regime);
        EXPECT_LE(r.local_tests_run, r.c_n * 2 * reps * (ceil_log2(n) + 1)) << n;
        EXPECT_LE(r.local_tests_run, r.n_max) << n;
        EXPECT_LE(r.estimator_evals, n);
        EXPECT_LE(static_cast<double>(r.kernel_evals),
                  2.0 * r.n_max * (2.0 * n * r.bandwidth + 2.0));
    }
}
}  // namespace

TEST(Fomt, LocalTestsWithinNmaxPractical) { check_local_test_budget(Regime::Practical); }

TEST(Fomt, LocalTestsWithinNmaxTheoretical) { check_local_test_budget(Regime::Theoretical); }

TEST(Sfomt, AdjacentPairsOnly) {
    const Sample smp = generate_sample(Signal(SignalId::F0), 300, 0.3, 4);
    RandomStream rng(8);
    const TestReport r = sfomt_run(smp.y, config(Regime::Practical, 0.3), rng);
    EXPECT_LE(r.local_tests_run, 2 * r.c_n);
    EXPECT_EQ(r.method, "sfomt");

    const std::vector<double> two{1.0, 0.0};
    RandomStream rng2(1);
    TestConfig cfg = config(Regime::Practical, 0.3);
    const TestReport r2 = sfomt_run(two, cfg, rng2);
    EXPECT_EQ(r2.local_tests_run, r2.outer_iterations);
    if (r2.witness) {
        EXPECT_EQ(r2.witness->first, 1u);
        EXPECT_EQ(r2.witness->second, 2u);
    }
}

TEST(Sfomt, SmoothDecreaseFoundInInterior) {
    const std::size_t n = 400;
    const auto y = tabulate(n, [](double x) { return -x; });
    RandomStream rng(12);
    const TestReport r = sfomt_run(y, config(Regime::Practical, 1e-6, 1.0, 1.5), rng);
    ASSERT_TRUE(r.rejected());
    EXPECT_EQ(r.witness->second, r.witness->first + 1);
    EXPECT_TRUE(is_interior(n, r.bandwidth, r.witness->first));
    EXPECT_TRUE(is_interior(n, r.bandwidth, r.witness->second));
}

TEST(Fomt, InputChecks) {
    const std::vector<double> one{1.0};
    RandomStream rng(1);
    EXPECT_THROW(fomt_run(one, TestConfig{}, rng), std::invalid_argument);
    TestConfig bad;
    bad.sigma = 0.0;
    const std::vector<double> y(100, 0.0);
    EXPECT_THROW(fomt_run(y, bad, rng), std::invalid_argument);
    TestConfig rice;
    rice.noise = NoiseMode::Rice;
    EXPECT_THROW(fomt_run(y, rice, rng), std::invalid_argument);  // Rice estimate is 0
    EXPECT_EQ(ceil_log2(1), 0u);
    EXPECT_EQ(ceil_log2(2), 1u);
    EXPECT_EQ(ceil_log2(5), 3u);
    EXPECT_EQ(ceil_log2(1024), 10u);
}
