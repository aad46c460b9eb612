#include "pindist/runner.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

using pindist::BackendChoice;
using pindist::make_field;
using pindist::resolve_backend;
using pindist::resolve_thread_config;
using pindist::RunConfig;
using pindist::run_experiment;
using pindist::run_field_info;
using pindist::run_sweep;
using pindist::run_verify;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << path;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fresh_dir(const std::string& name) {
  std::string dir = testing::TempDir() + "/pindist_runner_" + name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(BackendResolution, AutoPrefersDftOnlyForLargePrimeSpaces) {
  auto F3 = make_field(3, 1);
  auto F9 = make_field(3, 2);
  auto F127 = make_field(127, 1);
  EXPECT_EQ(resolve_backend(BackendChoice::auto_select, F3, 9), pindist::SweepBackend::naive);
  EXPECT_EQ(resolve_backend(BackendChoice::auto_select, F127, 127ull * 127),
            pindist::SweepBackend::naive);  // 16129 < 2^16
  EXPECT_EQ(resolve_backend(BackendChoice::auto_select, F127, 1ull << 21),
            pindist::SweepBackend::dft);
  EXPECT_EQ(resolve_backend(BackendChoice::auto_select, F9, 1ull << 21),
            pindist::SweepBackend::naive);  // extension field stays naive
  EXPECT_EQ(resolve_backend(BackendChoice::dft, F3, 9), pindist::SweepBackend::dft);
  EXPECT_EQ(resolve_backend(BackendChoice::naive, F127, 1ull << 21),
            pindist::SweepBackend::naive);
}

TEST(ThreadResolution, FlagThenEnvThenHardware) {
  EXPECT_EQ(resolve_thread_config(3).count, 3u);
  EXPECT_EQ(resolve_thread_config(3).source, "flag");

  setenv("PINDIST_THREADS", "2", 1);
  EXPECT_EQ(resolve_thread_config(0).count, 2u);
  EXPECT_EQ(resolve_thread_config(0).source, "env");
  setenv("PINDIST_THREADS", "bogus", 1);
  EXPECT_EQ(resolve_thread_config(0).source, "hardware");
  unsetenv("PINDIST_THREADS");
  EXPECT_GE(resolve_thread_config(0).count, 1u);
  EXPECT_EQ(resolve_thread_config(0).source, "hardware");
}

TEST(RunVerify, FullPlaneWritesPassingReports) {
  RunConfig cfg;
  cfg.out_dir = fresh_dir("verify_full");
  std::ostringstream out, err;
  ASSERT_EQ(run_verify(cfg, out, err), 0) << err.str();

  // four-plus reports: axioms, audit, pinned bound, corollary, bisector
  const char* names[] = {"report-field-axioms.json", "report-second-moment-pigeonhole.json",
                         "report-pinned-count-bound.json", "report-augmented-distance-bound.json",
                         "report-bisector-hyperplane.json"};
  int found = 0;
  for (const char* name : names) {
    std::string path = cfg.out_dir + "/" + name;
    if (!fs::exists(path)) continue;
    ++found;
    auto j = nlohmann::json::parse(slurp(path));
    EXPECT_EQ(j["schema"], "pindist-report/1");
    EXPECT_TRUE(j["passed"].get<bool>()) << name;
    EXPECT_EQ(j["config"]["set"], "full");
    EXPECT_EQ(j["generator"], pindist::kGeneratorId);
    EXPECT_TRUE(j.contains("content_hash"));
    EXPECT_TRUE(j.contains("timestamp"));
  }
  EXPECT_EQ(found, 5);
  EXPECT_NE(out.str().find("PASS"), std::string::npos);
}

TEST(RunVerify, ReportsAreReproducibleUpToTimestamp) {
  RunConfig cfg;
  cfg.p = 3;
  cfg.k = 2;
  cfg.d = 2;
  cfg.set_spec = "random:20:seed=1";
  cfg.a_num = 3;
  cfg.a_den = 2;
  cfg.threads = 2;

  cfg.out_dir = fresh_dir("verify_rep_a");
  std::ostringstream out1, err1;
  ASSERT_EQ(run_verify(cfg, out1, err1), 0) << err1.str();
  auto first = nlohmann::json::parse(slurp(cfg.out_dir + "/report-pinned-count-bound.json"));

  cfg.out_dir = fresh_dir("verify_rep_b");
  std::ostringstream out2, err2;
  ASSERT_EQ(run_verify(cfg, out2, err2), 0) << err2.str();
  auto second = nlohmann::json::parse(slurp(cfg.out_dir + "/report-pinned-count-bound.json"));

  EXPECT_EQ(first["content_hash"], second["content_hash"]);
  first.erase("timestamp");
  second.erase("timestamp");
  first["config"].erase("out");
  second["config"].erase("out");
  EXPECT_EQ(first, second);
}

TEST(RunVerify, BadFieldIsConfigError) {
  RunConfig cfg;
  cfg.p = 2;
  cfg.out_dir = fresh_dir("verify_even");
  std::ostringstream out, err;
  EXPECT_EQ(run_verify(cfg, out, err), 2);
  EXPECT_NE(err.str().find("EvenCharacteristic"), std::string::npos);
}

TEST(RunSweep, CsvAndSummaryTotalsMatch) {
  RunConfig cfg;
  cfg.out_dir = fresh_dir("sweep_full");
  std::ostringstream out, err;
  ASSERT_EQ(run_sweep(cfg, out, err), 0) << err.str();

  std::string csv = slurp(cfg.out_dir + "/sweep.csv");
  EXPECT_NE(csv.find("pin_index,second_moment,pinned_count\n"), std::string::npos);
  // F_3^2 full set: 9 rows, each second moment 33
  int rows = 0;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",33,3"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 9);

  auto j = nlohmann::json::parse(slurp(cfg.out_dir + "/sweep-summary.json"));
  EXPECT_EQ(j["total_second_moment"], "297");
  EXPECT_EQ(j["expected_total"], "297");
  EXPECT_TRUE(j["totals_match"].get<bool>());
}

TEST(RunSweep, BackendsProduceIdenticalCsv) {
  RunConfig cfg;
  cfg.p = 5;
  cfg.d = 3;
  cfg.set_spec = "random:30:seed=7";

  cfg.backend = BackendChoice::naive;
  cfg.out_dir = fresh_dir("sweep_naive");
  std::ostringstream o1, e1;
  ASSERT_EQ(run_sweep(cfg, o1, e1), 0) << e1.str();
  std::string naive_csv = slurp(cfg.out_dir + "/sweep.csv");

  cfg.backend = BackendChoice::dft;
  cfg.out_dir = fresh_dir("sweep_dft");
  std::ostringstream o2, e2;
  ASSERT_EQ(run_sweep(cfg, o2, e2), 0) << e2.str();
  std::string dft_csv = slurp(cfg.out_dir + "/sweep.csv");

  EXPECT_EQ(naive_csv, dft_csv);
}

TEST(RunSweep, CapExceededFails) {
  RunConfig cfg;
  cfg.p = 5;
  cfg.d = 3;
  cfg.cap = 100;  // 125 > 100
  cfg.out_dir = fresh_dir("sweep_cap");
  std::ostringstream out, err;
  EXPECT_EQ(run_sweep(cfg, out, err), 2);
  EXPECT_NE(err.str().find("SizeCapExceeded"), std::string::npos);
}

TEST(RunExperiment, DeterministicCsvAndGuarantee) {
  RunConfig cfg;
  cfg.p = 7;
  cfg.d = 2;
  cfg.sizes = {7, 14, 28};
  cfg.trials = 20;
  cfg.seed = 100;

  cfg.out_dir = fresh_dir("exp_a");
  std::ostringstream o1, e1;
  ASSERT_EQ(run_experiment(cfg, o1, e1), 0) << e1.str();
  std::string first = slurp(cfg.out_dir + "/experiment.csv");

  cfg.out_dir = fresh_dir("exp_b");
  std::ostringstream o2, e2;
  ASSERT_EQ(run_experiment(cfg, o2, e2), 0) << e2.str();
  std::string second = slurp(cfg.out_dir + "/experiment.csv");

  EXPECT_EQ(first, second);

  // 3 sizes x 20 trials + header
  int rows = 0;
  std::istringstream lines(first);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line,
            "size,trial,seed,success_pins,good_pins,total_pins,success_fraction,"
            "good_fraction,distance_count");
  std::uint64_t anum = cfg.a_num, aden = cfg.a_den;
  while (std::getline(lines, line)) {
    ++rows;
    // good-pin fraction satisfies num*good >= (num-den)*total on every row
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> parts;
    while (std::getline(cells, cell, ',')) parts.push_back(cell);
    ASSERT_EQ(parts.size(), 9u);
    std::uint64_t good = std::stoull(parts[4]);
    std::uint64_t total = std::stoull(parts[5]);
    EXPECT_GE(anum * good, (anum - aden) * total) << line;
  }
  EXPECT_EQ(rows, 60);
}

TEST(RunExperiment, FullSpaceSizePinsAlwaysSucceed) {
  RunConfig cfg;
  cfg.p = 5;
  cfg.d = 2;
  cfg.sizes = {25};  // the whole plane
  cfg.trials = 2;
  cfg.out_dir = fresh_dir("exp_full");
  std::ostringstream out, err;
  ASSERT_EQ(run_experiment(cfg, out, err), 0) << err.str();
  std::string csv = slurp(cfg.out_dir + "/experiment.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> parts;
    while (std::getline(cells, cell, ',')) parts.push_back(cell);
    EXPECT_EQ(parts[3], "25");  // success_pins == total_pins
    EXPECT_EQ(parts[5], "25");
  }
}

TEST(RunFieldInfo, EmitsFieldJson) {
  RunConfig cfg;
  cfg.p = 3;
  cfg.k = 2;
  std::ostringstream out, err;
  ASSERT_EQ(run_field_info(cfg, out, err), 0);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["schema"], "pindist-field/1");
  EXPECT_EQ(j["q"], 9);
  EXPECT_EQ(j["modulus"], (std::vector<int>{1, 0, 1}));
}

}  // namespace
