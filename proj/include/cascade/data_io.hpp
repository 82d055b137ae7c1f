#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/timeline.hpp"

namespace cascade {

// EPEX spot price bounds, EUR/MWh.
inline constexpr double kPriceCap = 9999.0;

struct MarketData {
  Timeline timeline;
  std::vector<double> daa_actual;  // H hourly clearing prices
  std::vector<double> ida_actual;  // Q quarter-hourly clearing prices
  std::vector<double> id1_actual;  // Q ID1 index values
  std::optional<std::vector<double>> daa_forecast;
  std::optional<std::vector<double>> ida_forecast;
  std::optional<std::vector<double>> id1_forecast;

  const std::vector<double>& actual(MarketSegment s) const;
  const std::optional<std::vector<double>>& forecast(MarketSegment s) const;

  // Throws DataError when a series has the wrong length, a non-finite value
  // or a price beyond +-9999 EUR/MWh.
  void validate() const;
};

struct LocalTimestamp {
  std::chrono::sys_seconds utc;
  std::chrono::minutes offset{0};
};

// ISO-8601 "YYYY-MM-DDTHH:MM[:SS]" followed by "Z" or "+HH:MM"/"-HH:MM".
// A space may replace the "T". Throws DataError.
LocalTimestamp parse_timestamp(std::string_view text);
std::string format_timestamp(std::chrono::sys_seconds utc, std::chrono::minutes offset);

// Reads one or more market CSV files (header "timestamp,segment,price_eur_mwh"
// with an optional trailing "kind" column of actual|forecast) and aligns them
// to the timeline. Rows outside the timeline are ignored. Errors name the
// file and row, or the missing period.
MarketData load_market_csv(std::span<const std::filesystem::path> paths,
                           const Timeline& timeline);
MarketData load_market_csv(const std::filesystem::path& path, const Timeline& timeline);

// Timeline spanned by the actual DAA rows of the given files.
Timeline infer_timeline(std::span<const std::filesystem::path> paths);

// Combined-schema export, readable by load_market_csv.
void write_market_csv(const MarketData& data, std::ostream& out);

std::vector<double> perfect_forecast(std::span<const double> actual);

// actual[q] * (1 + sigma * eps_q) with eps_q standard normal drawn from a
// generator seeded by (seed, stream). Identical inputs give identical output.
std::vector<double> noisy_id1_forecast(std::span<const double> actual, double sigma,
                                       std::uint64_t seed, std::uint64_t stream = 0);

// Throw ValidationError on length mismatch or empty input.
double mae(std::span<const double> forecast, std::span<const double> actual);
double rmse(std::span<const double> forecast, std::span<const double> actual);

}  // namespace cascade
