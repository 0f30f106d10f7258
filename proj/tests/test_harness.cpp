#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "monotest/harness.hpp"
#include "monotest/io.hpp"
#include "monotest/report.hpp"
#include "monotest/rng.hpp"

using namespace monotest;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "monotest-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<ResultRow> sample_rows() {
    ResultRow a{"fomt", "f3", 400, 0.25, 0.125, 0.0625, 0.3, 17.5, 1200.0, 0};
    ResultRow b{"fomt", "f3", 800, 1.0 / 3.0, 1e-7, 2e-8, 0.1, 3.0, 10.0, 1};
    ResultRow c{"ds1", "f0", 400, 0.05, 0.5, 0.25, 0.75, 0.0, 0.0, 0};
    return {a, b, c};
}

ExperimentPlan small_plan() {
    ExperimentPlan p;
    p.methods = {Method::Fomt, Method::Ds1};
    p.signals = {SignalId::F0, SignalId::F3};
    p.n_grid = {60, 120};
    p.repetitions = 6;
    p.master_seed = 42;
    p.base.mc_reps = 50;
    return p;
}

}  // namespace

TEST(Harness, RunSeedSeparatesCells) {
    const auto a = run_seed(1, Method::Fomt, SignalId::F0, 400, 0);
    EXPECT_EQ(a, run_seed(1, Method::Fomt, SignalId::F0, 400, 0));
    EXPECT_EQ(a, derive_seed(1, {hash_label("fomt"), hash_label("f0"), 400, 0}));
    EXPECT_NE(a, run_seed(2, Method::Fomt, SignalId::F0, 400, 0));
    EXPECT_NE(a, run_seed(1, Method::Afomt, SignalId::F0, 400, 0));
    EXPECT_NE(a, run_seed(1, Method::Fomt, SignalId::F1, 400, 0));
    EXPECT_NE(a, run_seed(1, Method::Fomt, SignalId::F0, 800, 0));
    EXPECT_NE(a, run_seed(1, Method::Fomt, SignalId::F0, 400, 1));
}

TEST(Harness, Names) {
    for (Method m : {Method::Fomt, Method::Sfomt, Method::Afomt, Method::Ds1, Method::Ds2}) {
        EXPECT_EQ(parse_method(method_name(m)), m);
    }
    EXPECT_THROW(parse_method("isotonic"), std::invalid_argument);
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Harness, EmptyGridGivesNoRows) {
    ExperimentPlan p = small_plan();
    p.n_grid.clear();
    EXPECT_TRUE(run_power_experiment(p).empty());
    EXPECT_TRUE(run_runtime_benchmark(p).empty());
}

TEST(Harness, PlanChecks) {
    ExperimentPlan p = small_plan();
    p.n_grid = {120, 60};
    EXPECT_THROW(run_power_experiment(p), std::invalid_argument);
    p.n_grid = {49};
    EXPECT_THROW(run_power_experiment(p), std::invalid_argument);
    p.n_grid = {60};
    p.repetitions = 0;
    EXPECT_THROW(run_power_experiment(p), std::invalid_argument);
}

TEST(Harness, SerialAndParallelAgree) {
    const ExperimentPlan p = small_plan();
    const auto a = run_power_experiment(p, Execution::Serial);
    const auto b = run_power_experiment(p, Execution::Parallel);
    ASSERT_EQ(a.size(), 8u);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].method, b[k].method);
        EXPECT_EQ(a[k].signal, b[k].signal);
        EXPECT_EQ(a[k].n, b[k].n);
        EXPECT_EQ(a[k].rejection_rate, b[k].rejection_rate);
        EXPECT_EQ(a[k].local_tests_median, b[k].local_tests_median);
        EXPECT_EQ(a[k].estimator_evals_median, b[k].estimator_evals_median);
        EXPECT_EQ(a[k].errors, 0u);
    }
}

TEST(Harness, CellRepetitionsMatchStandaloneRuns) {
    const ExperimentPlan p = small_plan();
    const auto runs = run_cell(p, Method::Fomt, SignalId::F3, 120, Execution::Serial);
    for (std::size_t rep = 0; rep < runs.size(); ++rep) {
        const std::uint64_t seed = run_seed(42, Method::Fomt, SignalId::F3, 120, rep);
        const Sample s = generate_sample(Signal(SignalId::F3), 120, 0.3, seed);
        TestConfig cfg = p.base;
        cfg.seed = derive_seed(seed, {hash_label("scan")});
        const TestReport r = run_method(Method::Fomt, s.y, cfg, 0.0);
        EXPECT_EQ(runs[rep].rejected, r.rejected());
        EXPECT_EQ(runs[rep].local_tests, r.local_tests_run);
    }
}

TEST(Harness, FailuresAreRecorded) {
    ExperimentPlan p = small_plan();
    p.methods = {Method::Afomt};
    p.signals = {SignalId::F0};
    p.n_grid = {60};
    p.base.kappa = 1.0;  // below the admissible floor
    const auto rows = run_power_experiment(p);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].errors, p.repetitions);
    EXPECT_EQ(rows[0].rejection_rate, 0.0);
    const auto runs = run_cell(p, Method::Afomt, SignalId::F0, 60);
    EXPECT_TRUE(runs[0].failed);
    EXPECT_NE(runs[0].error.find("kappa"), std::string::npos);
}

TEST(Harness, Quantiles) {
    EXPECT_EQ(quantile({}, 0.5), 0.0);
    EXPECT_EQ(quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
    EXPECT_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.5), 2.5);
    EXPECT_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.25), 2.0);
    EXPECT_EQ(quantile({7.0}, 0.75), 7.0);
}

TEST(Emit, CsvRoundTrip) {
    const fs::path dir = scratch("csv");
    const auto rows = sample_rows();
    const auto files = emit(rows, OutputFormat::Csv, dir / "out.csv");
    ASSERT_EQ(files.size(), 1u);
    const auto back = parse_results_csv(files[0]);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(back[k].method, rows[k].method);
        EXPECT_EQ(back[k].signal, rows[k].signal);
        EXPECT_EQ(back[k].n, rows[k].n);
        EXPECT_EQ(back[k].rejection_rate, rows[k].rejection_rate);
        EXPECT_EQ(back[k].median_s, rows[k].median_s);
        EXPECT_EQ(back[k].q25_s, rows[k].q25_s);
        EXPECT_EQ(back[k].q75_s, rows[k].q75_s);
        EXPECT_EQ(back[k].local_tests_median, rows[k].local_tests_median);
    }
}

TEST(Emit, HeaderOnlyForNoRows) {
    const fs::path dir = scratch("empty");
    emit({}, OutputFormat::Csv, dir / "out.csv");
    std::ifstream in(dir / "out.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), std::string(kCsvHeader) + "\n");
}

TEST(Emit, PlotFilesHaveFourColumns) {
    const fs::path dir = scratch("plot");
    const auto files = emit(sample_rows(), OutputFormat::Plotdat, dir);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_TRUE(fs::exists(dir / "fomt_f3.dat"));
    EXPECT_TRUE(fs::exists(dir / "ds1_f0.dat"));
    std::ifstream in(dir / "fomt_f3.dat");
    std::string line;
    std::size_t data = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> cols;
        double v;
        while (ls >> v) cols.push_back(v);
        EXPECT_EQ(cols.size(), 4u);
        ++data;
    }
    EXPECT_EQ(data, 2u);
}

TEST(Emit, JsonMirrorsRows) {
    const fs::path dir = scratch("json");
    emit(sample_rows(), OutputFormat::Json, dir / "out.json");
    std::ifstream in(dir / "out.json");
    const auto doc = nlohmann::json::parse(in);
    ASSERT_EQ(doc.size(), 3u);
    EXPECT_EQ(doc[0]["method"], "fomt");
    EXPECT_EQ(doc[1]["n"], 800);
    EXPECT_EQ(doc[1]["errors"], 1);
    EXPECT_DOUBLE_EQ(doc[0]["local_tests_median"].get<double>(), 17.5);
}

TEST(Emit, UnwritablePathThrows) {
    EXPECT_THROW(emit(sample_rows(), OutputFormat::Csv, "/proc/monotest/nope.csv"),
                 std::runtime_error);
}

TEST(Io, ReadsOneAndTwoColumns) {
    const fs::path dir = scratch("io");
    {
        std::ofstream(dir / "one.csv") << "y\n1.5\n-2\n\n3e-1\n";
        std::ofstream(dir / "two.csv") << "0.25,1\n0.5,2\n0.75,3\n1,4\n";
        std::ofstream(dir / "badx.csv") << "0.1,1\n0.2,2\n";
        std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
    }
    EXPECT_EQ(read_observations(dir / "one.csv"), (std::vector<double>{1.5, -2.0, 0.3}));
    EXPECT_EQ(read_observations(dir / "two.csv"), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_THROW(read_observations(dir / "badx.csv"), std::runtime_error);
    EXPECT_THROW(read_numeric_table(dir / "ragged.csv"), std::runtime_error);
    EXPECT_THROW(read_numeric_table(dir / "missing.csv"), std::runtime_error);
}

TEST(Report, JsonFields) {
    TestReport r;
    r.method = "fomt";
    r.decision = Decision::Reject;
    r.witness = {3, 9};
    r.statistic = 1.5;
    const auto j = to_json(r);
    EXPECT_EQ(j["decision"], "reject");
    EXPECT_EQ(j["witness"][0], 3);
    EXPECT_EQ(j["witness"][1], 9);
    TestReport a;
    EXPECT_TRUE(to_json(a)["witness"].is_null());
}
