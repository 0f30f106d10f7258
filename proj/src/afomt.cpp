#include "monotest/afomt.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "monotest/calibration.hpp"
#include "monotest/calm.hpp"
#include "monotest/fomt.hpp"

namespace monotest {

PairBatch generate_index_pairs(std::size_t n, std::size_t origin, RandomStream& rng,
                               std::size_t repetitions) {
    if (!(origin >= 1 && origin <= n)) throw std::invalid_argument("origin outside [1, n]");
    PairBatch batch;
    batch.origin = origin;
    batch.indices.push_back(origin);
    auto insert = [&](std::size_t a, std::size_t b) {
        const std::pair<std::size_t, std::size_t> p{a, b};
        if (std::find(batch.pairs.begin(), batch.pairs.end(), p) == batch.pairs.end()) {
            batch.pairs.push_back(p);
        }
        const std::size_t partner = a == origin ? b : a;
        batch.indices.push_back(partner);
    };
    if (origin <= n - 1) {
        const std::size_t room = n - origin;
        const std::size_t top = ceil_log2(room);
        for (std::size_t r = 0; r < repetitions; ++r) {
            for (std::size_t k = 1; k <= top; ++k) {
                const std::size_t span = std::min<std::size_t>(std::size_t{1} << k, room);
                insert(origin, origin + rng.uniform_index(span));
            }
        }
    }
    if (origin >= 2) {
        const std::size_t room = origin - 1;
        const std::size_t top = ceil_log2(room);
        for (std::size_t r = 0; r < repetitions; ++r) {
            for (std::size_t k = 0; k <= top; ++k) {
                const std::size_t span = std::min<std::size_t>(std::size_t{1} << k, room);
                insert(origin - rng.uniform_index(span), origin);
            }
        }
    }
    std::sort(batch.indices.begin(), batch.indices.end());
    batch.indices.erase(std::unique(batch.indices.begin(), batch.indices.end()),
                        batch.indices.end());
    return batch;
}

TestReport afomt_run(std::span<const double> y, const TestConfig& cfg, RandomStream& rng) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("need at least three observations");
    const KernelSpec kernel = kernel_constants(cfg.kernel, cfg.lambda0_source);
    const double sigma = resolve_sigma(y, cfg);
    const ConstantSet cs = derive_constants(cfg.beta, cfg.L, sigma, kernel, cfg.regime, 1);
    const Budget b = budget(n, cfg.alpha, 0.0, BudgetVariant::Afomt);
    const std::size_t reps = repetition_count(n, cfg.regime, cfg.repetition_factor);

    CalmOptions opts;
    opts.kappa = cfg.kappa.value_or(default_kappa(kernel));
    if (!(opts.kappa > minimal_kappa(kernel))) {
        throw std::invalid_argument("kappa must exceed 1 + 2 K_max / sqrt(mu2)");
    }
    opts.grid_base = cfg.grid_base.value_or(default_grid_base(cfg.regime));
    opts.regime = cfg.regime;
    opts.exec = Execution::Serial;

    TestReport report;
    report.method = "afomt";
    report.n = n;
    report.c_n = b.c_n;
    report.n_max = b.n_max;
    report.sigma_used = sigma;
    report.seed = rng.seed();
    const std::uint64_t draws_before = rng.index_draws();

    bool rejected = false;
    for (std::uint64_t l = 0; l < b.c_n && !rejected; ++l) {
        ++report.outer_iterations;
        const std::size_t origin = rng.uniform_index(n);
        const PairBatch batch = generate_index_pairs(n, origin, rng, reps);
        const CalmFit fit = calm_fit(y, batch.indices, kernel, sigma, opts);
        report.estimator_evals += fit.estimator_evals;
        report.kernel_evals += fit.kernel_evals;
        report.bandwidth = fit.h_selected;
        for (const auto& [i, j] : batch.pairs) {
            ++report.local_tests_run;
            const double q = critical_noise_term(n, cfg.alpha, fit.h_selected, i, j, cs, b.n_max);
            const double t = fit.estimate_at(i) - fit.estimate_at(j);
            if (t >= q) {
                rejected = true;
                report.decision = Decision::Reject;
                report.witness = {i, j};
                report.statistic = t;
                report.critical = q;
                report.witness_bandwidth = fit.h_selected;
                break;
            }
        }
    }
    report.index_draws = rng.index_draws() - draws_before;
    report.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace monotest
