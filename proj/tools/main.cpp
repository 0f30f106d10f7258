#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monotest/afomt.hpp"
#include "monotest/calibration.hpp"
#include "monotest/calm.hpp"
#include "monotest/exceedance.hpp"
#include "monotest/fomt.hpp"
#include "monotest/harness.hpp"
#include "monotest/io.hpp"
#include "monotest/kernels.hpp"
#include "monotest/lpe.hpp"
#include "monotest/report.hpp"
#include "monotest/rng.hpp"
#include "monotest/signals.hpp"

using namespace monotest;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Entries of a config file: a JSON object or key=value lines.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::vector<std::pair<std::string, std::string>> entries;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("bad config file: ") + e.what());
        }
        for (const auto& [key, value] : doc.items()) {
            if (value.is_string()) {
                entries.emplace_back(key, value.get<std::string>());
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& v : value) {
                    if (!joined.empty()) joined += ',';
                    joined += v.is_string() ? v.get<std::string>() : v.dump();
                }
                entries.emplace_back(key, joined);
            } else {
                entries.emplace_back(key, value.dump());
            }
        }
        return entries;
    }
    auto trim = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\"");
        const auto b = s.find_last_not_of(" \t\r\"");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

// Fills options of the chosen subcommand that were not given on the command
// line (or through the environment).
void apply_config(CLI::App* sub, const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [key, value] : entries) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            std::cerr << "warning: config key '" << key << "' is not an option of "
                      << sub->get_name() << '\n';
            continue;
        }
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

template <class T, class F>
std::vector<T> parse_list(const std::vector<std::string>& names, F parse) {
    std::vector<T> out;
    for (const std::string& s : names) out.push_back(parse(s));
    return out;
}

// Options shared by the subcommands that run a test on data.
struct DataOptions {
    std::string input;
    std::string signal = "f0";
    std::size_t n = 400;
    double sigma_true = 0.3;
    std::uint64_t seed = 1;

    void attach(CLI::App* app) {
        app->add_option("--input", input, "CSV with y, or x,y on the grid i/n");
        app->add_option("--signal", signal, "Simulate from f0..f4 when no input is given");
        app->add_option("-n,--n", n, "Sample size for simulated data");
        app->add_option("--noise-sd", sigma_true, "Noise level of simulated data");
        app->add_option("--seed", seed, "Seed for simulation and scans");
    }

    std::vector<double> load() const {
        if (!input.empty()) return read_observations(input);
        return generate_sample(Signal(parse_signal(signal)), n, sigma_true, seed).y;
    }
};

struct ConfigOptions {
    TestConfig cfg;
    std::string kernel = "epanechnikov";
    std::string regime = "practical";
    std::string noise = "known";
    std::string lambda0 = "conservative";
    std::optional<double> kappa;
    std::optional<double> grid_base;
    std::optional<double> rep_factor;

    void attach(CLI::App* app) {
        app->add_option("--alpha", cfg.alpha, "Level");
        app->add_option("--beta", cfg.beta, "Smoothness");
        app->add_option("--lipschitz", cfg.L, "Hölder constant");
        app->add_option("--sigma", cfg.sigma, "Known noise level");
        app->add_option("--kernel", kernel)->check(
            CLI::IsMember({"epanechnikov", "triangular", "quartic", "cosine"}));
        app->add_option("--regime", regime)->check(CLI::IsMember({"theoretical", "practical"}));
        app->add_option("--noise", noise, "known or rice")->check(CLI::IsMember({"known", "rice"}));
        app->add_option("--lambda0", lambda0)->check(
            CLI::IsMember({"conservative", "tabulated"}));
        app->add_option("--kappa", kappa);
        app->add_option("--grid-base", grid_base);
        app->add_option("--rep-factor", rep_factor, "Repetition constant per origin");
        app->add_option("--mc-reps", cfg.mc_reps, "Noise samples for multiscale critical values");
    }

    TestConfig resolve() const {
        TestConfig c = cfg;
        c.kernel = parse_kernel(kernel);
        c.regime = parse_regime(regime);
        c.noise = noise == "rice" ? NoiseMode::Rice : NoiseMode::Known;
        c.lambda0_source =
            lambda0 == "tabulated" ? Lambda0Source::Tabulated : Lambda0Source::Conservative;
        c.kappa = kappa;
        c.grid_base = grid_base;
        c.repetition_factor = rep_factor;
        return c;
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = i + 1;
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sublinear-time monotonicity tests for nonparametric regression"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all");
    std::string config_path;
    app.add_option("--config", config_path, "key=value or JSON file; flags override it");

    // test
    auto* test = app.add_subcommand("test", "Run one monotonicity test");
    DataOptions test_data;
    ConfigOptions test_cfg;
    std::string method = "fomt";
    bool as_json = false;
    test_data.attach(test);
    test_cfg.attach(test);
    test->add_option("--method", method)->check(
        CLI::IsMember({"fomt", "sfomt", "afomt", "ds1", "ds2"}));
    test->add_flag("--json", as_json, "Print the full report as JSON");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Draw a sample Y_i = f(i/n) + sigma Z_i");
    std::string sim_signal = "f0", sim_out;
    std::size_t sim_n = 400;
    double sim_sigma = 0.3;
    std::uint64_t sim_seed = 1;
    simulate->add_option("--signal", sim_signal)->check(
        CLI::IsMember({"f0", "f1", "f2", "f3", "f4"}));
    simulate->add_option("-n,--n", sim_n);
    simulate->add_option("--noise-sd", sim_sigma);
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("-o,--output", sim_out, "File to write, stdout by default");

    // fit
    auto* fit = app.add_subcommand("fit", "Local polynomial estimates at grid points");
    DataOptions fit_data;
    double fit_h = 0.1;
    int fit_order = 0;
    std::string fit_kernel = "epanechnikov", fit_out;
    std::vector<std::size_t> fit_at;
    fit_data.attach(fit);
    fit->add_option("--bandwidth", fit_h)->required();
    fit->add_option("--order", fit_order)->check(CLI::Range(0, 1));
    fit->add_option("--kernel", fit_kernel);
    fit->add_option("--at", fit_at, "1-based indices; all points by default");
    fit->add_option("-o,--output", fit_out);

    // calm
    auto* calm = app.add_subcommand("calm", "Adaptive bandwidth selection on an index set");
    DataOptions calm_data;
    ConfigOptions calm_cfg;
    std::vector<std::size_t> calm_at;
    calm_data.attach(calm);
    calm_cfg.attach(calm);
    calm->add_option("--at", calm_at, "1-based indices; all points by default");

    // exceedance
    auto* exc = app.add_subcommand("exceedance", "Distance-to-monotone fractions of a grid function");
    std::string exc_input;
    double exc_gamma = 0.1;
    int exc_order = 0;
    bool exc_heavy = false;
    exc->add_option("--input", exc_input, "CSV of values, or value,derivative")->required();
    exc->add_option("--gamma", exc_gamma)->required();
    exc->add_option("--order", exc_order)->check(CLI::Range(0, 1));
    exc->add_flag("--heavy", exc_heavy, "Also list the heavy points");

    // constants
    auto* consts = app.add_subcommand("constants", "Print the calibration constants");
    ConfigOptions const_cfg;
    std::optional<int> const_order;
    std::optional<std::size_t> const_n;
    const_cfg.attach(consts);
    consts->add_option("--order", const_order)->check(CLI::Range(0, 1));
    consts->add_option("-n,--n", const_n, "Also report bandwidth and budgets for this n");

    // bench
    auto* bench = app.add_subcommand("bench", "Power and runtime tables over a grid of n");
    ConfigOptions bench_cfg;
    std::vector<std::string> bench_methods{"fomt", "afomt", "ds1"};
    std::vector<std::string> bench_signals{"f0", "f1", "f2", "f3", "f4"};
    std::vector<std::size_t> bench_n{400, 800, 1600};
    std::size_t bench_reps = 100, bench_jobs = 0;
    std::uint64_t bench_seed = 1;
    double bench_noise = 0.3;
    std::string bench_format = "csv", bench_dir = ".";
    bool bench_large = false, bench_serial = false;
    bench_cfg.attach(bench);
    bench->add_option("--methods", bench_methods)->delimiter(',');
    bench->add_option("--signals", bench_signals)->delimiter(',');
    bench->add_option("--n-grid", bench_n)->delimiter(',');
    bench->add_flag("--large", bench_large, "Use the grid 10000,100000");
    bench->add_option("--reps", bench_reps);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--noise-sd", bench_noise);
    bench->add_option("--jobs", bench_jobs, "Worker threads, 0 for the OpenMP default");
    bench->add_flag("--serial", bench_serial, "Run repetitions on one thread");
    bench->add_option("--format", bench_format)->check(CLI::IsMember({"csv", "json", "plotdat"}));
    bench->add_option("--output-dir", bench_dir)->envname("MONOTEST_OUTPUT_DIR");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            const auto entries = read_config(config_path);
            for (CLI::App* sub : app.get_subcommands()) apply_config(sub, entries);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*test) {
            const std::vector<double> y = test_data.load();
            TestConfig cfg = test_cfg.resolve();
            cfg.seed = test_data.seed;
            const TestReport r =
                run_method(parse_method(method), y, cfg, std::numeric_limits<double>::quiet_NaN());
            if (as_json) {
                std::cout << to_json(r).dump(2) << '\n';
            } else {
                std::cout << r.method << ": " << decision_name(r.decision);
                if (r.witness) std::cout << " at (" << r.witness->first << ", " << r.witness->second << ")";
                std::cout << "\nstatistic " << r.statistic << " critical " << r.critical
                          << "\nlocal tests " << r.local_tests_run << " estimator evals "
                          << r.estimator_evals << '\n';
            }
        } else if (*simulate) {
            const Sample s = generate_sample(Signal(parse_signal(sim_signal)), sim_n, sim_sigma, sim_seed);
            std::ostringstream os;
            os.precision(17);
            os << "x,y\n";
            for (std::size_t i = 1; i <= s.n; ++i) {
                os << static_cast<double>(i) / static_cast<double>(s.n) << ',' << s.y[i - 1] << '\n';
            }
            write_text(sim_out, os.str());
        } else if (*fit) {
            const std::vector<double> y = fit_data.load();
            const KernelSpec k = kernel_constants(parse_kernel(fit_kernel));
            validate_bandwidth(y.size(), fit_h);
            const auto idx = fit_at.empty() ? all_indices(y.size()) : fit_at;
            for (std::size_t i : idx) {
                if (i < 1 || i > y.size()) throw UsageError("index outside [1, n]");
            }
            const auto est = estimate_indices(y, fit_h, fit_order, k, idx);
            std::ostringstream os;
            os.precision(17);
            os << "index,x,fhat\n";
            for (std::size_t t = 0; t < idx.size(); ++t) {
                os << idx[t] << ',' << static_cast<double>(idx[t]) / static_cast<double>(y.size())
                   << ',' << est[t] << '\n';
            }
            write_text(fit_out, os.str());
        } else if (*calm) {
            const std::vector<double> y = calm_data.load();
            const TestConfig cfg = calm_cfg.resolve();
            const KernelSpec k = kernel_constants(cfg.kernel, cfg.lambda0_source);
            CalmOptions opt;
            opt.regime = cfg.regime;
            opt.kappa = cfg.kappa.value_or(0.0);
            opt.grid_base = cfg.grid_base.value_or(default_grid_base(cfg.regime));
            const auto idx = calm_at.empty() ? all_indices(y.size()) : calm_at;
            const CalmFit f = calm_fit(y, idx, k, resolve_sigma(y, cfg), opt);
            std::cout << to_json(f).dump(2) << '\n';
        } else if (*exc) {
            const auto table = read_numeric_table(exc_input);
            GridFunction gf;
            for (const auto& row : table) gf.values.push_back(row[0]);
            if (table.front().size() >= 2) {
                gf.derivatives.emplace();
                for (const auto& row : table) gf.derivatives->push_back(row[1]);
            }
            nlohmann::json j;
            j["m"] = gf.m();
            j["gamma"] = exc_gamma;
            j["order"] = exc_order;
            j["fraction"] = exc_order == 0 ? exceedance0_grid(gf.values, exc_gamma)
                                           : exceedance1_grid(gf, exc_gamma);
            if (exc_heavy) j["heavy_points"] = heavy_points(gf.values, exc_gamma);
            std::cout << j.dump(2) << '\n';
        } else if (*consts) {
            const TestConfig cfg = const_cfg.resolve();
            const ConstantSet cs = derive_constants(cfg.beta, cfg.L, cfg.sigma,
                                                    kernel_constants(cfg.kernel, cfg.lambda0_source),
                                                    cfg.regime, const_order);
            nlohmann::json j = to_json(cs);
            if (const_n) {
                const double h = optimal_bandwidth(*const_n, cs);
                const Budget b = budget(*const_n, cfg.alpha, h, BudgetVariant::Fomt);
                const Budget ba = budget(*const_n, cfg.alpha, h, BudgetVariant::Afomt);
                j["n"] = *const_n;
                j["h_n"] = h;
                j["C_n"] = b.c_n;
                j["N_max"] = b.n_max;
                j["C_n_adaptive"] = ba.c_n;
                j["N_max_adaptive"] = ba.n_max;
                j["repetitions"] = repetition_count(*const_n, cfg.regime, cfg.repetition_factor);
            }
            std::cout << j.dump(2) << '\n';
        } else if (*bench) {
            ExperimentPlan plan;
            plan.methods = parse_list<Method>(bench_methods, parse_method);
            plan.signals = parse_list<SignalId>(bench_signals, parse_signal);
            plan.n_grid = bench_large ? std::vector<std::size_t>{10000, 100000} : bench_n;
            plan.repetitions = bench_reps;
            plan.master_seed = bench_seed;
            plan.sigma = bench_noise;
            plan.base = bench_cfg.resolve();
            plan.alpha = plan.base.alpha;
            plan.regime = plan.base.regime;
            plan.jobs = bench_jobs;
            plan.output_dir = bench_dir;
            const auto rows = run_power_experiment(
                plan, bench_serial ? Execution::Serial : Execution::Parallel);
            const OutputFormat fmt = parse_format(bench_format);
            const fs::path target = fmt == OutputFormat::Plotdat ? plan.output_dir
                                    : fmt == OutputFormat::Json  ? plan.output_dir / "results.json"
                                                                 : plan.output_dir / "results.csv";
            for (const auto& p : emit(rows, fmt, target)) std::cout << p.string() << '\n';
        }
    } catch (const DegenerateDesign& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    } catch (const std::exception& e) {
        // Bad parameters, unreadable input, unwritable output.
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
