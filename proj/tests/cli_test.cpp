#include "commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "invroot/mtx_io.hpp"
#include "invroot/trace_io.hpp"

namespace invroot::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "invroot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("invroot_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, GenWritesDeterministicFile) {
  auto r = run_cli({"gen", "--n", "128", "--density", "0.25", "--seed", "7", "--out", path("a.mtx")});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const std::string first = slurp(path("a.mtx"));
  EXPECT_EQ(first.rfind("%%MatrixMarket matrix coordinate real symmetric", 0), 0u);
  EXPECT_EQ(load_matrix(path("a.mtx")).n(), 128u);
  r = run_cli({"gen", "--n", "128", "--density", "0.25", "--seed", "7", "--out", path("b.mtx")});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_EQ(slurp(path("b.mtx")), first);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({"gen", "--n", "16", "--density", "0", "--out", path("x.mtx")}).code, kUsageError);
  EXPECT_EQ(run_cli({"gen", "--n", "16"}).code, kUsageError);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(run_cli({}).code, kUsageError);
  EXPECT_EQ(run_cli({"solve", "--n", "16", "--arith", "float:x"}).code, kUsageError);
  EXPECT_EQ(run_cli({"solve", "--n", "16", "--p", "0"}).code, kUsageError);
  EXPECT_EQ(run_cli({"solve", "--matrix", path("missing.mtx")}).code, kUsageError);
  EXPECT_EQ(run_cli({"sweep", "--n", "16", "--formats", "", "--out", path("s")}).code, kUsageError);
  EXPECT_EQ(run_cli({"sweep", "--n", "16", "--formats", "half", "--mode", "both", "--out", path("s")}).code,
            kUsageError);
  EXPECT_EQ(run_cli({"solve", "--n", "16", "--escalate", "half,half"}).code, kUsageError);
}

TEST_F(CliTest, HelpSucceeds) {
  EXPECT_EQ(run_cli({"--help"}).code, kSuccess);
}

TEST_F(CliTest, SolveIdentityConvergesAtFirstStep) {
  save_matrix(Matrix::identity(4), path("i.mtx"));
  const auto r = run_cli({"solve", "--matrix", path("i.mtx"), "--p", "2", "--arith", "exact", "--trace",
                          path("t.csv"), "--json", path("t.json")});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  std::ifstream in(path("t.csv"));
  const auto recs = read_trace_csv(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs.back().k, 1);
  EXPECT_EQ(recs.back().residual_fro, 0.0);
  EXPECT_NE(slurp(path("t.json")).find("\"converged\""), std::string::npos);
}

TEST_F(CliTest, SolveReducedPrecisionPlateausAboveExact) {
  const auto plateau = [&](const std::string& arith, const std::string& csv) {
    const auto r = run_cli({"solve", "--n", "64", "--density", "0.25", "--seed", "7", "--arith", arith,
                            "--trace", path(csv)});
    EXPECT_EQ(r.code, kSuccess) << arith << " " << r.err;
    std::ifstream in(path(csv));
    SolveTrace t;
    t.records = read_trace_csv(in);
    return summarize(t).plateau_level;
  };
  EXPECT_GT(plateau("float:e11m10", "m10.csv"), plateau("exact", "exact.csv"));
}

TEST_F(CliTest, SolveCoarseFixedPointFails) {
  const auto r = run_cli({"solve", "--n", "64", "--density", "0.25", "--seed", "7", "--arith",
                          "fixed:i13f2", "--trace", path("f2.csv")});
  std::ifstream in(path("f2.csv"));
  SolveTrace t;
  t.records = read_trace_csv(in);
  EXPECT_TRUE(r.code == kNumericalFailure || summarize(t).plateau_level > 0.1) << r.code;
}

TEST_F(CliTest, SweepWritesOneTracePerCell) {
  const auto r = run_cli({"sweep", "--n", "32", "--density", "0.5", "--mode", "storage", "--formats",
                          "float:m6,float:m10,float:m14", "--out", path("sw"), "--max-iters", "40"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  int csvs = 0;
  for (const auto& e : fs::directory_iterator(path("sw"))) {
    if (e.path().filename() == "summary.csv") continue;
    ++csvs;
    std::ifstream in(e.path());
    EXPECT_NO_THROW(read_trace_csv(in)) << e.path();
  }
  EXPECT_EQ(csvs, 3);
  EXPECT_TRUE(fs::exists(path("sw/p2_storage-only_float-m6.csv")));
  std::istringstream summary(slurp(path("sw/summary.csv")));
  std::string line;
  std::getline(summary, line);
  EXPECT_EQ(line, kSummaryCsvHeader);
  std::vector<double> plateaus;
  while (std::getline(summary, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 7u) << line;
    EXPECT_EQ(cols[1], "storage-only");
    plateaus.push_back(std::stod(cols[4]));
  }
  ASSERT_EQ(plateaus.size(), 3u);
  EXPECT_LE(plateaus[1], plateaus[0] * 1.05);
  EXPECT_LE(plateaus[2], plateaus[1] * 1.05);
}

TEST_F(CliTest, SweepSummaryIsByteStableAcrossJobCounts) {
  const std::vector<std::string> base{"sweep", "--n", "24", "--density", "0.5", "--p", "1,2",
                                      "--formats", "half,float:m8,fixed:f12", "--max-iters", "30"};
  auto a = base;
  a.insert(a.end(), {"--out", path("a"), "--jobs", "1"});
  auto b = base;
  b.insert(b.end(), {"--out", path("b"), "--jobs", "3"});
  ASSERT_EQ(run_cli(a).code, kSuccess);
  ASSERT_EQ(run_cli(b).code, kSuccess);
  EXPECT_EQ(slurp(path("a/summary.csv")), slurp(path("b/summary.csv")));
  EXPECT_EQ(slurp(path("a/p1_all-arithmetic_half.csv")),
            slurp(path("b/p1_all-arithmetic_half.csv")));
}

TEST_F(CliTest, SweepWithReferenceFillsErrorColumn) {
  ASSERT_EQ(run_cli({"sweep", "--n", "16", "--density", "0.5", "--formats", "single", "--out", path("r"),
                     "--reference", "oracle"})
                .code,
            kSuccess);
  std::ifstream in(path("r/p2_all-arithmetic_single.csv"));
  for (const auto& rec : read_trace_csv(in)) EXPECT_TRUE(rec.error_fro.has_value());
}

TEST_F(CliTest, ValidateExamples) {
  save_matrix(Matrix::identity(3), path("i.mtx"));
  auto r = run_cli({"validate", "--matrix", path("i.mtx")});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(run_validate({.source = {.file = path("i.mtx")}}).gap, 0.0);

  save_matrix(Matrix::diagonal({4, 16}), path("d.mtx"));
  const auto d = run_validate({.source = {.file = path("d.mtx")}, .p = 2});
  EXPECT_LT(d.gap, 1e-12);
  EXPECT_EQ(d.outcome, Outcome::converged);

  r = run_cli({"validate", "--n", "64", "--density", "0.25", "--seed", "3"});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  const auto g = run_validate({.source = {.generated = {.n = 64, .target_density = 0.25, .seed = 3}}});
  EXPECT_LT(g.gap, 1e-8);
}

TEST(SweepMode, Parsing) {
  EXPECT_EQ(parse_sweep_mode("arith"), SweepMode::all_arithmetic);
  EXPECT_EQ(parse_sweep_mode("all-arithmetic"), SweepMode::all_arithmetic);
  EXPECT_EQ(parse_sweep_mode("storage"), SweepMode::storage_only);
  EXPECT_EQ(parse_sweep_mode("storage-only"), SweepMode::storage_only);
  EXPECT_THROW(parse_sweep_mode("x"), UsageError);
  EXPECT_EQ(cell_file_stem(2, SweepMode::storage_only, "float:e11m10"), "p2_storage-only_float-e11m10");
}

}  // namespace
}  // namespace invroot::cli
