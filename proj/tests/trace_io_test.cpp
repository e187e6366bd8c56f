#include "invroot/trace_io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <limits>
#include <sstream>

#include "invroot/errors.hpp"
#include "invroot/matgen.hpp"
#include "invroot/oracle.hpp"

namespace invroot {
namespace {

SolveTrace sample_trace(bool with_reference) {
  const Matrix a = gen_overlap({.n = 24, .target_density = 0.5, .seed = 2});
  SolverConfig cfg;
  cfg.arith = ArithmeticModel::parse("float:m10");
  cfg.storage = ArithmeticModel::parse("half");
  cfg.max_iters = 30;
  return with_reference ? solve(a, cfg, reference_inv_proot(a, 2)) : solve(a, cfg);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  for (double x : {1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.5e-17})
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
}

TEST(TraceCsv, RoundTripsRecords) {
  for (bool ref : {false, true}) {
    const auto t = sample_trace(ref);
    std::stringstream s;
    write_trace_csv(s, t);
    const std::string text = s.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), kTraceCsvHeader);
    const auto back = read_trace_csv(s);
    ASSERT_EQ(back.size(), t.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].k, t.records[i].k);
      EXPECT_EQ(back[i].residual_fro, t.records[i].residual_fro);
      EXPECT_EQ(back[i].delta_fro, t.records[i].delta_fro);
      EXPECT_EQ(back[i].error_fro, t.records[i].error_fro);
      EXPECT_EQ(back[i].active_arith, "float:e11m10");
      EXPECT_EQ(back[i].active_storage, "float:e5m10");
    }
  }
}

TEST(TraceCsv, RejectsBrokenInvariants) {
  const std::string h = std::string(kTraceCsvHeader) + "\n";
  const auto bad = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_trace_csv(in), ParseError) << text;
  };
  bad("iter,residual\n");
  bad(h + "0,-1,,0,exact,exact\n");
  bad(h + "0,1,,0,exact,exact\n0,0.5,,0.1,exact,exact\n");
  bad(h + "0,1,,0,exact\n");
  bad(h + "0,abc,,0,exact,exact\n");
  std::istringstream ok(h + "0,1,,0,exact,exact\n1,0.5,0.2,0.1,exact,exact\n");
  const auto recs = read_trace_csv(ok);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_FALSE(recs[0].error_fro.has_value());
  EXPECT_EQ(recs[1].error_fro, 0.2);
}

TEST(TraceJson, CarriesSummaryFields) {
  const auto t = sample_trace(false);
  std::stringstream s;
  write_trace_json(s, t);
  const auto j = nlohmann::json::parse(s.str());
  EXPECT_EQ(j.at("outcome"), std::string(to_string(t.outcome)));
  EXPECT_EQ(j.at("config").at("p"), 2);
  EXPECT_EQ(j.at("config").at("arith"), "float:e11m10");
  EXPECT_EQ(j.at("n"), 24);
  EXPECT_EQ(j.at("iterations"), t.last().k);
  EXPECT_EQ(j.at("plateau").get<double>(), summarize(t).plateau_level);
  EXPECT_TRUE(j.contains("contraction"));
  EXPECT_TRUE(j.at("escalations").is_array());
  EXPECT_TRUE(j.at("warnings").is_array());
}

}  // namespace
}  // namespace invroot
