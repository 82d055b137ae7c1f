#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cascade/cascade.h"

namespace {

namespace fs = std::filesystem;

const std::string kSample = std::string(SAMPLE_DIR) + "/prices_1day.csv";
const std::string kConfig = std::string(SAMPLE_DIR) + "/case_study.cfg";

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cascade_c_api_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CApi, RunSample) {
  cascade_config* cfg = nullptr;
  ASSERT_EQ(cascade_config_load(kConfig.c_str(), &cfg), CASCADE_OK) << cascade_last_error();
  const char* paths[] = {kSample.c_str()};
  cascade_market* market = nullptr;
  ASSERT_EQ(cascade_market_load(cfg, paths, 1, &market), CASCADE_OK) << cascade_last_error();

  std::size_t hours = 0, quarters = 0;
  int fd = 0, fi = 0, fc = 0;
  ASSERT_EQ(cascade_market_info(market, &hours, &quarters, &fd, &fi, &fc), CASCADE_OK);
  EXPECT_EQ(hours, 24u);
  EXPECT_EQ(quarters, 96u);
  EXPECT_EQ(fd, 1);
  EXPECT_EQ(fi, 1);
  EXPECT_EQ(fc, 0);

  cascade_portfolio* p = nullptr;
  ASSERT_EQ(cascade_run(cfg, market, &p), CASCADE_OK) << cascade_last_error();
  double rev[4];
  ASSERT_EQ(cascade_portfolio_revenue(p, rev), CASCADE_OK);
  EXPECT_NEAR(rev[0] + rev[1] + rev[2], rev[3], 1e-9);
  EXPECT_GT(rev[3], 0.0);
  std::size_t n = 0;
  ASSERT_EQ(cascade_portfolio_trade_count(p, &n), CASCADE_OK);
  EXPECT_GT(n, 0u);

  const auto out = fresh_dir("reports");
  ASSERT_EQ(cascade_portfolio_write_reports(p, out.string().c_str()), CASCADE_OK)
      << cascade_last_error();
  for (const char* f : {"revenue.csv", "daily_revenue.csv", "trades.csv", "soc.csv",
                        "traces/day_2023-03-01.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(slurp(out / "revenue.csv").substr(0, 30), "segment,revenue_eur,share_pct\n");
  fs::remove_all(out);

  cascade_portfolio_free(p);
  cascade_market_free(market);
  cascade_config_free(cfg);
}

TEST(CApi, ErrorsAreReported) {
  cascade_config* cfg = nullptr;
  ASSERT_EQ(cascade_config_default(&cfg), CASCADE_OK);
  EXPECT_EQ(cascade_config_set(cfg, "e_maxx", "3"), CASCADE_ERR_CONFIG);
  EXPECT_NE(std::string(cascade_last_error()).find("e_maxx"), std::string::npos);
  cascade_config* unused = nullptr;
  EXPECT_EQ(cascade_config_load("/nonexistent/x.cfg", &unused), CASCADE_ERR_CONFIG);
  EXPECT_EQ(unused, nullptr);

  const char* missing[] = {"/nonexistent/prices.csv"};
  cascade_market* market = nullptr;
  EXPECT_EQ(cascade_market_load(cfg, missing, 1, &market), CASCADE_ERR_IO);
  EXPECT_EQ(market, nullptr);
  std::size_t hours = 0;
  EXPECT_EQ(cascade_market_validate(missing, 1, &hours), CASCADE_ERR_IO);
  cascade_config_free(cfg);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(cascade_config_default(nullptr), CASCADE_ERR_ARGUMENT);
  EXPECT_EQ(cascade_run(nullptr, nullptr, nullptr), CASCADE_ERR_ARGUMENT);
  EXPECT_EQ(cascade_portfolio_revenue(nullptr, nullptr), CASCADE_ERR_ARGUMENT);
  EXPECT_EQ(cascade_market_load(nullptr, nullptr, 0, nullptr), CASCADE_ERR_ARGUMENT);
  cascade_config_free(nullptr);
  cascade_market_free(nullptr);
  cascade_portfolio_free(nullptr);
  EXPECT_STREQ(cascade_status_name(CASCADE_ERR_SOLVER), "solver error");
  EXPECT_STREQ(cascade_version(), "1.0.0");
}

TEST(CApi, SweepAndDumpLp) {
  cascade_config* cfg = nullptr;
  ASSERT_EQ(cascade_config_load(kConfig.c_str(), &cfg), CASCADE_OK);
  const char* paths[] = {kSample.c_str()};
  cascade_market* market = nullptr;
  ASSERT_EQ(cascade_market_load(cfg, paths, 1, &market), CASCADE_OK);

  const auto out = fresh_dir("sweep");
  const double sigmas[] = {0.5};
  const std::uint64_t seeds[] = {1, 2};
  ASSERT_EQ(cascade_sweep(cfg, market, sigmas, 1, seeds, 2, 2, out.string().c_str()), CASCADE_OK)
      << cascade_last_error();
  const auto median = slurp(out / "sensitivity_median.csv");
  EXPECT_NE(median.find("\nPF,1,"), std::string::npos) << median;
  EXPECT_NE(median.find("\nID1 sigma=50%,2,"), std::string::npos) << median;

  const auto lp = out / "idc.lp";
  ASSERT_EQ(cascade_dump_lp(cfg, market, "idc:40", lp.string().c_str()), CASCADE_OK)
      << cascade_last_error();
  EXPECT_NE(slurp(lp).find("st"), std::string::npos);
  EXPECT_EQ(cascade_dump_lp(cfg, market, "idc:96", lp.string().c_str()), CASCADE_ERR_VALIDATION);
  EXPECT_EQ(cascade_dump_lp(cfg, market, "xyz", lp.string().c_str()), CASCADE_ERR_ARGUMENT);
  fs::remove_all(out);

  cascade_market_free(market);
  cascade_config_free(cfg);
}

}  // namespace
