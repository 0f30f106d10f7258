#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "monotest/calibration.hpp"
#include "monotest/exceedance.hpp"
#include "monotest/rng.hpp"
#include "monotest/signals.hpp"
#include "support/oracles.hpp"

using namespace monotest;

namespace {
std::vector<double> grid_values(std::size_t m, double (*f)(double)) {
    std::vector<double> v(m);
    for (std::size_t j = 1; j <= m; ++j) v[j - 1] = f(static_cast<double>(j) / m);
    return v;
}

std::vector<double> random_lipschitz(std::size_t m, double L, RandomStream& rng) {
    std::vector<double> v(m);
    double x = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        x += L / m * (2.0 * rng.uniform_open() - 1.0);
        v[j] = x;
    }
    return v;
}
}  // namespace

TEST(Exceedance0, Anchors) {
    const std::vector<double> inc{0.0, 0.1, 0.1, 2.0, 3.0};
    EXPECT_EQ(exceedance0_grid(inc, 0.01), 0.0);
    const std::vector<double> zigzag{0.0, 1.0, 0.0, 1.0};
    EXPECT_DOUBLE_EQ(exceedance0_grid(zigzag, 0.4), 0.25);
    const auto neg = grid_values(1000, [](double x) { return -x; });
    EXPECT_NEAR(exceedance0_grid(neg, 0.25), 0.5, 2.0 / 1000);
    EXPECT_THROW(exceedance0_grid(inc, 0.0), std::invalid_argument);
    EXPECT_THROW(exceedance0_grid(std::vector<double>{}, 0.1), std::invalid_argument);
}

TEST(Exceedance0, MatchesEnumerationOnSmallAlphabet) {
    const double gammas[] = {0.25, 0.5, 0.75, 1.0};
    std::size_t cases = 0;
    for (std::size_t m = 1; m <= 7; ++m) {
        std::size_t total = 1;
        for (std::size_t t = 0; t < m; ++t) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<double> f(m);
            std::size_t c = code;
            for (std::size_t t = 0; t < m; ++t, c /= 3) f[t] = static_cast<double>(c % 3);
            for (double g : gammas) {
                const double dp = exceedance0_grid(f, g);
                ASSERT_EQ(dp, oracle::exceedance_by_breakpoints(f, g));
                ASSERT_EQ(dp, oracle::exceedance_by_subsets(f, g));
            }
            ++cases;
        }
    }
    EXPECT_GT(cases, 3000u);
}

TEST(Exceedance0, MatchesEnumerationOnRandomReals) {
    RandomStream rng(17);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t m = 2 + rng.uniform_index(9);
        std::vector<double> f(m);
        for (double& v : f) v = rng.standard_normal();
        const double g = 0.05 + rng.uniform_open();
        ASSERT_EQ(exceedance0_grid(f, g), oracle::exceedance_by_subsets(f, g));
    }
}

TEST(Exceedance0, NonincreasingInGamma) {
    RandomStream rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const auto f = random_lipschitz(60, 3.0, rng);
        double prev = 1.0;
        for (double g = 0.01; g < 1.0; g *= 1.5) {
            const double e = exceedance0_grid(f, g);
            ASSERT_LE(e, prev);
            prev = e;
        }
    }
}

TEST(Exceedance0, DropGivesLowerBound) {
    // A drop of 2 gamma + delta under slope L forces delta / (2L) of mass.
    RandomStream rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 200;
        const double L = 0.5 + 3.0 * rng.uniform_open();
        const auto f = random_lipschitz(m, L, rng);
        double drop = 0.0;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) drop = std::max(drop, f[a] - f[b]);
        if (drop <= 0.0) continue;
        const double gamma = drop / 4.0;
        const double delta = drop - 2.0 * gamma;
        EXPECT_GE(exceedance0_grid(f, gamma), delta / (2.0 * L) - 2.0 / m);
    }
}

TEST(Exceedance0, DetectableAlternativesCoverABandwidth) {
    const KernelSpec k = kernel_constants(KernelId::Epanechnikov);
    const ConstantSet cs = derive_constants(1.0, 1.0, 0.3, k, Regime::Practical);
    const std::size_t n = 400;
    const double h = optimal_bandwidth(n, cs);
    for (SignalId id : {SignalId::F1, SignalId::F2, SignalId::F3, SignalId::F4}) {
        std::vector<double> v(n);
        for (std::size_t j = 1; j <= n; ++j) v[j - 1] = signal_eval(id, double(j) / n);
        EXPECT_GE(exceedance0_grid(v, 0.01), h - 2.0 / n) << signal_name(id);
    }
}

TEST(Exceedance1, Examples) {
    const std::size_t m = 1000;
    GridFunction inc{grid_values(m, [](double x) { return x; }), std::vector<double>(m, 1.0)};
    EXPECT_EQ(exceedance1_grid(inc, 0.1), 0.0);

    GridFunction f3{grid_values(m, [](double x) { return -0.3 * x; }), std::vector<double>(m, -0.3)};
    EXPECT_EQ(exceedance1_grid(f3, 0.1), 1.0);

    GridFunction f4{grid_values(m, [](double x) { return x * (1 - x); }),
                    grid_values(m, [](double x) { return 1 - 2 * x; })};
    EXPECT_NEAR(exceedance1_grid(f4, 0.2), 0.4, 1.0 / m);

    GridFunction bare{{1.0, 2.0}, std::nullopt};
    EXPECT_THROW(exceedance1_grid(bare, 0.1), std::invalid_argument);
}

TEST(HeavyPoints, Examples) {
    const auto inc = grid_values(300, [](double x) { return x * x; });
    EXPECT_TRUE(heavy_points(inc, 0.05).empty());

    const auto neg = grid_values(100, [](double x) { return -x; });
    const auto heavy = heavy_points(neg, 0.1);
    ASSERT_FALSE(heavy.empty());
    EXPECT_EQ(heavy.front(), 1u);
    EXPECT_TRUE(std::is_sorted(heavy.begin(), heavy.end()));
}

TEST(HeavyPoints, CoverExceedance) {
    RandomStream rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 50 + rng.uniform_index(150);
        const auto f = random_lipschitz(m, 4.0, rng);
        const double gamma = 0.02 + 0.3 * rng.uniform_open();
        const double measure = static_cast<double>(heavy_points(f, gamma).size()) / m;
        EXPECT_GE(measure, exceedance0_grid(f, gamma) - 2.0 / m);
    }
}
