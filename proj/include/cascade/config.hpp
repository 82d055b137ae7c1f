#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cascade/battery.hpp"
#include "cascade/data_io.hpp"
#include "cascade/engine.hpp"

namespace cascade {

// Flat key = value settings; '#' starts a comment. Keys mirror the
// BatteryParams and BacktestConfig fields:
//   p_max e_max eta_ch eta_dis gamma_month n_cyc e_init
//   start hours n_p forecast_daa forecast_ida forecast_idc sigma seed
// forecast_* take perfect | file | noisy (noisy only for IDC, using sigma and
// seed). start and hours are optional and otherwise taken from the data.
struct RunConfig {
  BatteryParams battery;
  std::optional<LocalTimestamp> start;
  std::optional<std::size_t> hours;
  std::size_t n_p = kQuartersPerDay;
  ForecastMode daa;
  ForecastMode ida;
  ForecastMode idc;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  // Applies one key; throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  // Fills missing start/hours from the data files.
  Timeline resolve_timeline(std::span<const std::filesystem::path> data_paths) const;
  BacktestConfig backtest(const Timeline& timeline) const;
};

RunConfig parse_config(std::string_view text, std::string_view source = "config");
RunConfig load_config(const std::filesystem::path& path);
std::string to_config_text(const RunConfig& config);

}  // namespace cascade
