#include "monotest/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "monotest/afomt.hpp"
#include "monotest/fomt.hpp"
#include "monotest/multiscale.hpp"
#include "monotest/report.hpp"
#include "monotest/rng.hpp"

namespace monotest {

Method parse_method(std::string_view name) {
    if (name == "fomt") return Method::Fomt;
    if (name == "sfomt") return Method::Sfomt;
    if (name == "afomt") return Method::Afomt;
    if (name == "ds1") return Method::Ds1;
    if (name == "ds2") return Method::Ds2;
    throw std::invalid_argument("unknown method: " + std::string(name));
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Fomt: return "fomt";
        case Method::Sfomt: return "sfomt";
        case Method::Afomt: return "afomt";
        case Method::Ds1: return "ds1";
        case Method::Ds2: return "ds2";
    }
    throw std::invalid_argument("unknown method");
}

std::uint64_t run_seed(std::uint64_t master, Method method, SignalId signal, std::size_t n,
                       std::size_t repetition) {
    return derive_seed(master, {hash_label(method_name(method)), hash_label(signal_name(signal)),
                                static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(repetition)});
}

namespace {

bool is_multiscale(Method m) { return m == Method::Ds1 || m == Method::Ds2; }

MultiscaleVariant variant_of(Method m) {
    return m == Method::Ds1 ? MultiscaleVariant::Ds1 : MultiscaleVariant::Ds2;
}

TestConfig cell_config(const ExperimentPlan& plan) {
    TestConfig cfg = plan.base;
    cfg.alpha = plan.alpha;
    cfg.sigma = plan.sigma;
    cfg.regime = plan.regime;
    return cfg;
}

}  // namespace

TestReport run_method(Method method, std::span<const double> y, const TestConfig& cfg,
                      double ds_critical) {
    if (is_multiscale(method)) {
        if (!std::isfinite(ds_critical)) return ds_run(variant_of(method), y, cfg);
        const auto start = std::chrono::steady_clock::now();
        const double sigma = resolve_sigma(y, cfg);
        const MultiscaleStat stat = ds_statistic(variant_of(method), y, sigma, Execution::Serial);
        TestReport r;
        r.method = method_name(method);
        r.n = y.size();
        r.sigma_used = sigma;
        r.seed = cfg.seed;
        r.statistic = stat.value;
        r.critical = ds_critical;
        r.kernel_evals = stat.kernel_evals;
        r.bandwidth = stat.h;
        if (stat.value > ds_critical) r.decision = Decision::Reject;
        r.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }
    RandomStream rng(cfg.seed);
    switch (method) {
        case Method::Fomt: return fomt_run(y, cfg, rng);
        case Method::Sfomt: return sfomt_run(y, cfg, rng);
        case Method::Afomt: return afomt_run(y, cfg, rng);
        default: break;
    }
    throw std::invalid_argument("unknown method");
}

std::vector<RunRecord> run_cell(const ExperimentPlan& plan, Method method, SignalId signal,
                                std::size_t n, Execution exec) {
    if (n < 50) throw std::invalid_argument("experiments need n >= 50");
    const TestConfig cfg = cell_config(plan);
    double critical = std::numeric_limits<double>::quiet_NaN();
    if (is_multiscale(method)) {
        // One simulated critical value per cell, shared by its repetitions.
        const std::uint64_t seed = derive_seed(
            plan.master_seed, {hash_label("mc-critical"), hash_label(method_name(method)), n});
        critical = mc_critical(variant_of(method), n, plan.sigma, plan.alpha, cfg.mc_reps, seed,
                               exec);
    }
    const Signal sig(signal);
    std::vector<RunRecord> runs(plan.repetitions);
    auto one = [&](std::size_t rep) {
        RunRecord rec;
        try {
            const std::uint64_t seed = run_seed(plan.master_seed, method, signal, n, rep);
            const Sample sample = generate_sample(sig, n, plan.sigma, seed);
            TestConfig run_cfg = cfg;
            run_cfg.seed = derive_seed(seed, {hash_label("scan")});
            const auto start = std::chrono::steady_clock::now();
            const TestReport r = run_method(method, sample.y, run_cfg, critical);
            rec.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            rec.rejected = r.rejected();
            rec.local_tests = r.local_tests_run;
            rec.estimator_evals = r.estimator_evals;
            rec.kernel_evals = r.kernel_evals;
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
        return rec;
    };
    const auto count = static_cast<std::ptrdiff_t>(plan.repetitions);
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t r = 0; r < count; ++r) runs[r] = one(static_cast<std::size_t>(r));
    } else {
        const int threads = plan.jobs > 0 ? static_cast<int>(plan.jobs) : 0;
        if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (std::ptrdiff_t r = 0; r < count; ++r) runs[r] = one(static_cast<std::size_t>(r));
        } else {
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t r = 0; r < count; ++r) runs[r] = one(static_cast<std::size_t>(r));
        }
    }
    return runs;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ResultRow summarize(Method method, SignalId signal, std::size_t n,
                    const std::vector<RunRecord>& runs) {
    ResultRow row;
    row.method = method_name(method);
    row.signal = signal_name(signal);
    row.n = n;
    std::vector<double> secs, tests, evals;
    std::size_t rejections = 0;
    for (const RunRecord& r : runs) {
        if (r.failed) {
            ++row.errors;
            continue;
        }
        rejections += r.rejected ? 1 : 0;
        secs.push_back(r.seconds);
        tests.push_back(static_cast<double>(r.local_tests));
        evals.push_back(static_cast<double>(r.estimator_evals));
    }
    const std::size_t ok = runs.size() - row.errors;
    row.rejection_rate = ok > 0 ? static_cast<double>(rejections) / static_cast<double>(ok) : 0.0;
    row.median_s = quantile(secs, 0.5);
    row.q25_s = quantile(secs, 0.25);
    row.q75_s = quantile(secs, 0.75);
    row.local_tests_median = quantile(tests, 0.5);
    row.estimator_evals_median = quantile(evals, 0.5);
    return row;
}

std::vector<ResultRow> run_power_experiment(const ExperimentPlan& plan, Execution exec) {
    if (plan.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (!std::is_sorted(plan.n_grid.begin(), plan.n_grid.end())) {
        throw std::invalid_argument("n grid must be ascending");
    }
    std::vector<ResultRow> rows;
    for (Method m : plan.methods) {
        for (SignalId s : plan.signals) {
            for (std::size_t n : plan.n_grid) {
                rows.push_back(summarize(m, s, n, run_cell(plan, m, s, n, exec)));
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_runtime_benchmark(const ExperimentPlan& plan, Execution exec) {
    return run_power_experiment(plan, exec);
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "plotdat") return OutputFormat::Plotdat;
    throw std::invalid_argument("unknown output format: " + std::string(name));
}

namespace {

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

std::vector<std::filesystem::path> emit(const std::vector<ResultRow>& rows, OutputFormat format,
                                        const std::filesystem::path& target) {
    std::vector<std::filesystem::path> written;
    if (format == OutputFormat::Csv) {
        std::ofstream out = open_for_write(target);
        out << kCsvHeader << '\n';
        for (const ResultRow& r : rows) {
            out << r.method << ',' << r.signal << ',' << r.n << ',' << number(r.rejection_rate)
                << ',' << number(r.median_s) << ',' << number(r.q25_s) << ','
                << number(r.q75_s) << ',' << number(r.local_tests_median) << '\n';
        }
        if (!out) throw std::runtime_error("write failed for " + target.string());
        written.push_back(target);
    } else if (format == OutputFormat::Json) {
        std::ofstream out = open_for_write(target);
        nlohmann::json arr = nlohmann::json::array();
        for (const ResultRow& r : rows) arr.push_back(to_json(r));
        out << arr.dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed for " + target.string());
        written.push_back(target);
    } else {
        std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
        for (const ResultRow& r : rows) groups[{r.method, r.signal}].push_back(&r);
        for (const auto& [key, members] : groups) {
            const auto path = target / (key.first + "_" + key.second + ".dat");
            std::ofstream out = open_for_write(path);
            out << "# n rejection_rate q25_s q75_s\n";
            for (const ResultRow* r : members) {
                out << r->n << ' ' << number(r->rejection_rate) << ' ' << number(r->q25_s)
                    << ' ' << number(r->q75_s) << '\n';
            }
            if (!out) throw std::runtime_error("write failed for " + path.string());
            written.push_back(path);
        }
    }
    return written;
}

std::vector<ResultRow> parse_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("unexpected header in " + path.string());
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw std::runtime_error("malformed row: " + line);
        ResultRow r;
        r.method = cells[0];
        r.signal = cells[1];
        r.n = std::stoull(cells[2]);
        r.rejection_rate = std::stod(cells[3]);
        r.median_s = std::stod(cells[4]);
        r.q25_s = std::stod(cells[5]);
        r.q75_s = std::stod(cells[6]);
        r.local_tests_median = std::stod(cells[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace monotest
