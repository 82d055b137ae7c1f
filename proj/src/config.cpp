#include "cascade/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cascade/error.hpp"

namespace cascade {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": '" + std::string(value) + "' is not a number");
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key) + ": '" + std::string(value) +
                      "' is not a non-negative integer");
  }
  return out;
}

ForecastMode::Kind to_mode(std::string_view key, std::string_view value) {
  if (value == "perfect") return ForecastMode::Kind::Perfect;
  if (value == "file") return ForecastMode::Kind::FromFile;
  if (value == "noisy") return ForecastMode::Kind::NoisyId1;
  throw ConfigError(std::string(key) + ": expected perfect, file or noisy, got '" +
                    std::string(value) + "'");
}

const char* mode_name(ForecastMode::Kind k) {
  switch (k) {
    case ForecastMode::Kind::Perfect: return "perfect";
    case ForecastMode::Kind::FromFile: return "file";
    case ForecastMode::Kind::NoisyId1: return "noisy";
  }
  return "perfect";
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "p_max") battery.p_max = to_double(key, value);
  else if (key == "e_max") battery.e_max = to_double(key, value);
  else if (key == "eta_ch") battery.eta_ch = to_double(key, value);
  else if (key == "eta_dis") battery.eta_dis = to_double(key, value);
  else if (key == "gamma_month") battery.gamma_month = to_double(key, value);
  else if (key == "n_cyc") battery.n_cyc = to_double(key, value);
  else if (key == "e_init") battery.e_init = to_double(key, value);
  else if (key == "n_p") n_p = to_unsigned(key, value);
  else if (key == "hours") hours = to_unsigned(key, value);
  else if (key == "sigma") sigma = to_double(key, value);
  else if (key == "seed") seed = to_unsigned(key, value);
  else if (key == "forecast_daa") daa.kind = to_mode(key, value);
  else if (key == "forecast_ida") ida.kind = to_mode(key, value);
  else if (key == "forecast_idc") idc.kind = to_mode(key, value);
  else if (key == "start") {
    try {
      start = parse_timestamp(value);
    } catch (const DataError& e) {
      throw ConfigError(std::string("start: ") + e.what());
    }
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

Timeline RunConfig::resolve_timeline(std::span<const std::filesystem::path> data_paths) const {
  if (start && hours) return Timeline(start->utc, *hours, start->offset);
  const Timeline inferred = infer_timeline(data_paths);
  if (!start && !hours) return inferred;
  if (hours) return Timeline(inferred.start(), *hours, inferred.utc_offset());
  const auto end = inferred.hour_start(inferred.hours());
  if (end <= start->utc) throw ConfigError("start lies after the end of the market data");
  const auto span = std::chrono::duration_cast<std::chrono::hours>(end - start->utc);
  return Timeline(start->utc, static_cast<std::size_t>(span.count()), start->offset);
}

BacktestConfig RunConfig::backtest(const Timeline& timeline) const {
  BacktestConfig c;
  c.battery = battery;
  c.timeline = timeline;
  c.n_p = n_p;
  c.daa = daa;
  c.ida = ida;
  c.idc = idc;
  if (c.idc.kind == ForecastMode::Kind::NoisyId1) {
    c.idc.sigma = sigma;
    c.idc.seed = seed;
  }
  c.validate();
  return c;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    try {
      config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  config.battery.validate();
  if (config.n_p == 0) throw ConfigError(std::string(source) + ": n_p must be at least 1");
  if (config.hours && *config.hours == 0) {
    throw ConfigError(std::string(source) + ": hours must be at least 1");
  }
  if (config.sigma < 0) throw ConfigError(std::string(source) + ": sigma must be >= 0");
  for (const auto* mode : {&config.daa, &config.ida}) {
    if (mode->kind == ForecastMode::Kind::NoisyId1) {
      throw ConfigError(std::string(source) + ": noisy forecasts are only available for IDC");
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "p_max = " << c.battery.p_max << "\n"
      << "e_max = " << c.battery.e_max << "\n"
      << "eta_ch = " << c.battery.eta_ch << "\n"
      << "eta_dis = " << c.battery.eta_dis << "\n"
      << "gamma_month = " << c.battery.gamma_month << "\n"
      << "n_cyc = " << c.battery.n_cyc << "\n"
      << "e_init = " << c.battery.e_init << "\n";
  if (c.start) out << "start = " << format_timestamp(c.start->utc, c.start->offset) << "\n";
  if (c.hours) out << "hours = " << *c.hours << "\n";
  out << "n_p = " << c.n_p << "\n"
      << "forecast_daa = " << mode_name(c.daa.kind) << "\n"
      << "forecast_ida = " << mode_name(c.ida.kind) << "\n"
      << "forecast_idc = " << mode_name(c.idc.kind) << "\n"
      << "sigma = " << c.sigma << "\n"
      << "seed = " << c.seed << "\n";
  return out.str();
}

}  // namespace cascade
