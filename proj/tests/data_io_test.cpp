#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <unistd.h>
#include <random>
#include <sstream>

#include "cascade/data_io.hpp"
#include "cascade/error.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("cascade_data_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path path_for_missing() const { return path_ / "missing.csv"; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string csv_of(const MarketData& d) {
  std::ostringstream out;
  write_market_csv(d, out);
  return out.str();
}

// Replaces the first line containing `needle`.
std::string replace_line(const std::string& text, const std::string& needle,
                         const std::string& with) {
  const auto at = text.find(needle);
  const auto begin = text.rfind('\n', at) + 1;
  const auto end = text.find('\n', at);
  return text.substr(0, begin) + with + text.substr(end);
}

std::string drop_line(const std::string& text, const std::string& needle) {
  const auto at = text.find(needle);
  const auto begin = text.rfind('\n', at) + 1;
  const auto end = text.find('\n', at);
  return text.substr(0, begin) + text.substr(end + 1);
}

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "no error";
}

TEST(Timestamps, ParseWithOffset) {
  const auto t = parse_timestamp("2023-03-01T00:15:00+01:00");
  EXPECT_EQ(t.offset, minutes{60});
  EXPECT_EQ(t.utc, sys_seconds{sys_days{year{2023} / 2 / 28}} + hours{23} + minutes{15});
}

TEST(Timestamps, AcceptedForms) {
  EXPECT_EQ(parse_timestamp("2023-03-01T10:00Z").utc, parse_timestamp("2023-03-01 11:00+0100").utc);
  EXPECT_EQ(parse_timestamp("2023-03-01T10:00:00-02:30").offset, minutes{-150});
}

TEST(Timestamps, Rejected) {
  for (const char* bad : {"2023-03-01", "2023-03-01T10:00", "2023-02-30T00:00Z",
                          "2023-03-01T24:00Z", "2023-03-01T10:00+1", "x023-03-01T10:00Z",
                          "2023-03-01T10:00Zjunk"}) {
    EXPECT_THROW(parse_timestamp(bad), DataError) << bad;
  }
}

TEST(Timestamps, FormatRoundTrip) {
  const auto t = parse_timestamp("2024-12-31T23:45:00+05:30");
  EXPECT_EQ(format_timestamp(t.utc, t.offset), "2024-12-31T23:45:00+05:30");
  EXPECT_EQ(format_timestamp(t.utc, minutes{0}), "2024-12-31T18:15:00Z");
}

TEST(LoadMarketCsv, WellFormedDay) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  const auto path = dir.write("day.csv", csv_of(data));
  const auto loaded = load_market_csv(path, data.timeline);
  EXPECT_EQ(loaded.daa_actual.size(), 24u);
  EXPECT_EQ(loaded.ida_actual.size(), 96u);
  EXPECT_EQ(loaded.id1_actual.size(), 96u);
  EXPECT_FALSE(loaded.daa_forecast.has_value());
}

TEST(LoadMarketCsv, RoundTripIsExact) {
  TempDir dir;
  auto data = testing::synthetic_market(2, 17);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 30.0);
  for (auto& v : data.ida_actual) v += n(rng) / 3.0;  // values with long decimal expansions
  data.daa_forecast = data.daa_actual;
  for (auto& v : *data.daa_forecast) v += 1.0 / 3.0;
  data.id1_forecast = data.id1_actual;
  const auto path = dir.write("rt.csv", csv_of(data));
  const auto loaded = load_market_csv(path, data.timeline);
  EXPECT_EQ(loaded.daa_actual, data.daa_actual);
  EXPECT_EQ(loaded.ida_actual, data.ida_actual);
  EXPECT_EQ(loaded.id1_actual, data.id1_actual);
  EXPECT_EQ(loaded.daa_forecast, data.daa_forecast);
  EXPECT_FALSE(loaded.ida_forecast.has_value());
  EXPECT_EQ(loaded.id1_forecast, data.id1_forecast);
  EXPECT_EQ(csv_of(loaded), csv_of(data));
}

TEST(LoadMarketCsv, GapNamesTheQuarter) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  // quarter 37 starts at 09:15 local time
  const auto path = dir.write("gap.csv", drop_line(csv_of(data), "T09:15:00+01:00,IDA"));
  const auto msg = error_of([&] { load_market_csv(path, data.timeline); });
  EXPECT_NE(msg.find("quarter 37"), std::string::npos) << msg;
  EXPECT_NE(msg.find("IDA"), std::string::npos) << msg;
}

TEST(LoadMarketCsv, DuplicateNamesBothRows) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  auto text = csv_of(data);
  text += "2023-03-01T05:00:00+01:00,DAA,12,actual\n";
  const auto path = dir.write("dup.csv", text);
  const auto msg = error_of([&] { load_market_csv(path, data.timeline); });
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
  EXPECT_NE(msg.find("dup.csv:7"), std::string::npos) << msg;
  EXPECT_NE(msg.find("dup.csv:218"), std::string::npos) << msg;
}

TEST(LoadMarketCsv, PriceBounds) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  const auto text = replace_line(csv_of(data), "T03:00:00+01:00,DAA",
                                 "2023-03-01T03:00:00+01:00,DAA,10000,actual");
  const auto msg = error_of([&] { load_market_csv(dir.write("cap.csv", text), data.timeline); });
  EXPECT_NE(msg.find("9999"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cap.csv:5"), std::string::npos) << msg;

  const auto ok = replace_line(csv_of(data), "T03:00:00+01:00,DAA",
                               "2023-03-01T03:00:00+01:00,DAA,-9999,actual");
  EXPECT_EQ(load_market_csv(dir.write("ok.csv", ok), data.timeline).daa_actual[3], -9999.0);
}

TEST(LoadMarketCsv, MisalignedTimestamp) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  const auto text = replace_line(csv_of(data), "T03:00:00+01:00,DAA",
                                 "2023-03-01T03:15:00+01:00,DAA,50,actual");
  const auto msg = error_of([&] { load_market_csv(dir.write("m.csv", text), data.timeline); });
  EXPECT_NE(msg.find("aligned"), std::string::npos) << msg;
}

TEST(LoadMarketCsv, OffsetChangeIsRejected) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 1);
  // Same instant, different offset: a clock change inside the file.
  const auto text = replace_line(csv_of(data), "T03:00:00+01:00,DAA",
                                 "2023-03-01T04:00:00+02:00,DAA,50,actual");
  const auto msg = error_of([&] { load_market_csv(dir.write("dst.csv", text), data.timeline); });
  EXPECT_NE(msg.find("offset"), std::string::npos) << msg;
}

TEST(LoadMarketCsv, MalformedRows) {
  TempDir dir;
  const auto tl = testing::test_timeline(1);
  EXPECT_THROW(load_market_csv(dir.write("a.csv", ""), tl), DataError);
  EXPECT_THROW(load_market_csv(dir.write("b.csv", "time,segment,price_eur_mwh\n"), tl), DataError);
  EXPECT_THROW(load_market_csv(dir.write("c.csv", "timestamp,segment,price_eur_mwh\n"
                                                  "2023-03-01T00:00:00+01:00,XYZ,1\n"),
                               tl),
               DataError);
  EXPECT_THROW(load_market_csv(dir.write("d.csv", "timestamp,segment,price_eur_mwh\n"
                                                  "2023-03-01T00:00:00+01:00,DAA,abc\n"),
                               tl),
               DataError);
  EXPECT_THROW(load_market_csv(dir.write("e.csv", "timestamp,segment,price_eur_mwh\n"
                                                  "2023-03-01T00:00:00+01:00,DAA\n"),
                               tl),
               DataError);
  EXPECT_THROW(load_market_csv(dir.path_for_missing(), tl), IoError);
}

TEST(LoadMarketCsv, FilesPerSegmentAreMerged) {
  TempDir dir;
  const auto data = testing::synthetic_market(1, 4);
  std::istringstream all(csv_of(data));
  std::string line, header;
  std::getline(all, header);
  std::map<std::string, std::string> per;
  while (std::getline(all, line)) {
    const auto seg = line.substr(line.find(',') + 1, 3);
    if (per[seg].empty()) per[seg] = "timestamp,segment,price_eur_mwh\n";
    per[seg] += line.substr(0, line.rfind(',')) + "\n";
  }
  std::vector<fs::path> paths;
  for (const auto& [seg, text] : per) paths.push_back(dir.write(seg + ".csv", text));
  const auto loaded = load_market_csv(paths, data.timeline);
  EXPECT_EQ(loaded.id1_actual, data.id1_actual);
  EXPECT_EQ(infer_timeline(paths), data.timeline);
}

TEST(LoadMarketCsv, RowsOutsideTheTimelineAreIgnored) {
  TempDir dir;
  const auto data = testing::synthetic_market(2, 4);
  const auto path = dir.write("two.csv", csv_of(data));
  const auto first = load_market_csv(path, testing::test_timeline(24));
  EXPECT_EQ(first.daa_actual.size(), 24u);
  EXPECT_EQ(first.daa_actual[23], data.daa_actual[23]);
}

TEST(InferTimeline, FromActualDayAheadRows) {
  TempDir dir;
  const auto data = testing::synthetic_market(3, 4);
  const auto path = dir.write("three.csv", csv_of(data));
  const std::vector<fs::path> paths = {path};
  const auto tl = infer_timeline(paths);
  EXPECT_EQ(tl.hours(), 72u);
  EXPECT_EQ(tl.start(), data.timeline.start());
  EXPECT_EQ(tl.utc_offset(), minutes{60});
}

TEST(PerfectForecast, CopiesActuals) {
  EXPECT_EQ(perfect_forecast(std::vector<double>{1, 2, 3}), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(perfect_forecast(std::vector<double>{}).empty());
  EXPECT_EQ(perfect_forecast(std::vector<double>{-40.5}), (std::vector<double>{-40.5}));
}

TEST(NoisyForecast, ZeroSigmaIsIdentity) {
  const auto data = testing::synthetic_market(1, 3);
  EXPECT_EQ(noisy_id1_forecast(data.id1_actual, 0.0, 5), data.id1_actual);
}

TEST(NoisyForecast, Reproducible) {
  const auto data = testing::synthetic_market(1, 3);
  EXPECT_EQ(noisy_id1_forecast(data.id1_actual, 0.1, 5), noisy_id1_forecast(data.id1_actual, 0.1, 5));
  EXPECT_NE(noisy_id1_forecast(data.id1_actual, 0.1, 5), noisy_id1_forecast(data.id1_actual, 0.1, 6));
  EXPECT_NE(noisy_id1_forecast(data.id1_actual, 0.1, 5, 1),
            noisy_id1_forecast(data.id1_actual, 0.1, 5, 2));
}

TEST(NoisyForecast, RelativeErrorHasTheRequestedSpread) {
  const std::vector<double> actual(5000, 80.0);
  const auto f = noisy_id1_forecast(actual, 0.1, 123);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f[i] / actual[i] - 1.0;
    sum += r;
    sq += r * r;
  }
  const double n = static_cast<double>(f.size());
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 0.1, 0.02);
}

TEST(NoisyForecast, NegativeSigma) {
  EXPECT_THROW(noisy_id1_forecast(std::vector<double>{1.0}, -0.1, 1), ConfigError);
}

TEST(Metrics, PerfectForecastHasNoError) {
  const std::vector<double> a = {1, -2, 3};
  EXPECT_EQ(mae(a, a), 0.0);
  EXPECT_EQ(rmse(a, a), 0.0);
}

TEST(Metrics, ConstantOffset) {
  const std::vector<double> a = {1, -2, 3, 40};
  std::vector<double> f = a;
  for (auto& v : f) v += 5.0;
  EXPECT_DOUBLE_EQ(mae(f, a), 5.0);
  EXPECT_DOUBLE_EQ(rmse(f, a), 5.0);
}

TEST(Metrics, HandComputed) {
  const std::vector<double> a = {0, 0};
  const std::vector<double> f = {3, -4};
  EXPECT_DOUBLE_EQ(mae(f, a), 3.5);
  EXPECT_NEAR(rmse(f, a), std::sqrt(12.5), 1e-15);
  EXPECT_NEAR(rmse(f, a), 3.5355339059327378, 1e-15);
}

TEST(Metrics, RmseNeverBelowMae) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-500, 500);
  std::uniform_int_distribution<int> len(1, 50);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a(static_cast<std::size_t>(len(rng))), f(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = u(rng);
      f[k] = u(rng);
    }
    EXPECT_GE(rmse(f, a), mae(f, a) - 1e-12);
  }
}

TEST(Metrics, LengthMismatch) {
  EXPECT_THROW(mae(std::vector<double>{1}, std::vector<double>{1, 2}), ValidationError);
  EXPECT_THROW(rmse(std::vector<double>{}, std::vector<double>{}), ValidationError);
}

}  // namespace
}  // namespace cascade
