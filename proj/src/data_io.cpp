#include "cascade/data_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "cascade/error.hpp"

namespace cascade {

namespace chr = std::chrono;

const std::vector<double>& MarketData::actual(MarketSegment s) const {
  switch (s) {
    case MarketSegment::Daa: return daa_actual;
    case MarketSegment::Ida: return ida_actual;
    case MarketSegment::Idc: return id1_actual;
  }
  return daa_actual;
}

const std::optional<std::vector<double>>& MarketData::forecast(MarketSegment s) const {
  switch (s) {
    case MarketSegment::Daa: return daa_forecast;
    case MarketSegment::Ida: return ida_forecast;
    case MarketSegment::Idc: return id1_forecast;
  }
  return daa_forecast;
}

namespace {

void check_series(const std::vector<double>& v, std::size_t expected, MarketSegment s,
                  const char* kind) {
  const std::string name = std::string(to_string(s)) + " " + kind;
  if (v.size() != expected) {
    throw DataError(name + " series has " + std::to_string(v.size()) + " values, expected " +
                    std::to_string(expected));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || std::abs(v[i]) > kPriceCap) {
      throw DataError(name + " price at period " + std::to_string(i) + " is outside +-9999");
    }
  }
}

}  // namespace

void MarketData::validate() const {
  if (!timeline.valid()) throw DataError("market data has no timeline");
  for (const auto s : kAllSegments) {
    check_series(actual(s), timeline.periods(s), s, "actual");
    if (forecast(s)) check_series(*forecast(s), timeline.periods(s), s, "forecast");
  }
}

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return res.ec == std::errc{};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

LocalTimestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  auto fail = [&](const char* why) -> LocalTimestamp {
    throw DataError("invalid timestamp '" + std::string(text) + "': " + why);
  };
  int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  if (!read_int(text, 0, 4, y) || text.size() < 16 || text[4] != '-' ||
      !read_int(text, 5, 2, mo) || text[7] != '-' || !read_int(text, 8, 2, d) ||
      (text[10] != 'T' && text[10] != ' ') || !read_int(text, 11, 2, hh) || text[13] != ':' ||
      !read_int(text, 14, 2, mm)) {
    return fail("expected YYYY-MM-DDTHH:MM");
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_int(text, pos + 1, 2, ss)) return fail("bad seconds");
    pos += 3;
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) return fail("field out of range");

  chr::minutes offset{0};
  if (pos == text.size()) return fail("missing UTC offset");
  if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) return fail("trailing characters");
  } else if (text[pos] == '+' || text[pos] == '-') {
    int oh = 0, om = 0;
    const bool colon = pos + 3 < text.size() && text[pos + 3] == ':';
    const std::size_t mpos = pos + (colon ? 4 : 3);
    if (!read_int(text, pos + 1, 2, oh) || !read_int(text, mpos, 2, om) ||
        mpos + 2 != text.size() || oh > 14 || om > 59) {
      return fail("bad UTC offset");
    }
    offset = chr::minutes{oh * 60 + om};
    if (text[pos] == '-') offset = -offset;
  } else {
    return fail("bad UTC offset");
  }
  const auto local = chr::sys_days{ymd} + chr::hours{hh} + chr::minutes{mm} + chr::seconds{ss};
  return {chr::sys_seconds{local - offset}, offset};
}

std::string format_timestamp(chr::sys_seconds utc, chr::minutes offset) {
  const auto local = utc + offset;
  const auto day = chr::floor<chr::days>(local);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss tod{local - day};
  char buf[64];
  if (offset == chr::minutes{0}) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()));
  } else {
    const long total = std::labs(offset.count());
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%c%02ld:%02ld", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()),
                  offset.count() < 0 ? '-' : '+', total / 60, total % 60);
  }
  return buf;
}

namespace {

struct Row {
  std::string where;  // "file:line"
  LocalTimestamp time;
  MarketSegment segment;
  bool forecast;
  double price;
};

MarketSegment parse_segment(std::string_view s, const std::string& where) {
  const auto v = lower(s);
  if (v == "daa") return MarketSegment::Daa;
  if (v == "ida") return MarketSegment::Ida;
  if (v == "idc" || v == "id1") return MarketSegment::Idc;
  throw DataError(where + ": unknown segment '" + std::string(s) + "' (expected DAA, IDA or IDC)");
}

double parse_price(std::string_view s, const std::string& where) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError(where + ": invalid price '" + std::string(s) + "'");
  }
  if (!std::isfinite(value) || std::abs(value) > kPriceCap) {
    throw DataError(where + ": price " + std::string(s) + " outside +-9999 EUR/MWh");
  }
  return value;
}

void read_rows(const std::filesystem::path& path, std::vector<Row>& rows) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open market data file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  int col_time = -1, col_segment = -1, col_price = -1, col_kind = -1;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split(line);
    if (!header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = lower(fields[i]);
        const int idx = static_cast<int>(i);
        if (name == "timestamp") col_time = idx;
        else if (name == "segment") col_segment = idx;
        else if (name == "price_eur_mwh") col_price = idx;
        else if (name == "kind") col_kind = idx;
        else throw DataError(where + ": unknown column '" + std::string(fields[i]) + "'");
      }
      if (col_time < 0 || col_segment < 0 || col_price < 0) {
        throw DataError(where + ": header must contain timestamp, segment and price_eur_mwh");
      }
      header = true;
      continue;
    }
    const int width = std::max({col_time, col_segment, col_price, col_kind}) + 1;
    if (static_cast<int>(fields.size()) != width) {
      throw DataError(where + ": expected " + std::to_string(width) + " fields, found " +
                      std::to_string(fields.size()));
    }
    Row row;
    row.where = where;
    try {
      row.time = parse_timestamp(fields[static_cast<std::size_t>(col_time)]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    row.segment = parse_segment(fields[static_cast<std::size_t>(col_segment)], where);
    row.price = parse_price(fields[static_cast<std::size_t>(col_price)], where);
    row.forecast = false;
    if (col_kind >= 0) {
      const auto kind = lower(fields[static_cast<std::size_t>(col_kind)]);
      if (kind == "forecast") row.forecast = true;
      else if (kind != "actual" && !kind.empty()) {
        throw DataError(where + ": kind must be actual or forecast");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!header) throw DataError(path.string() + ": empty file, missing header");
}

std::vector<Row> read_all(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw DataError("no market data files given");
  std::vector<Row> rows;
  for (const auto& p : paths) read_rows(p, rows);
  if (rows.empty()) throw DataError("market data contains no rows");
  // A changing UTC offset means local clock time with daylight saving; the
  // quarter grid would then have 92 or 100 periods on the switch day.
  for (const auto& r : rows) {
    if (r.time.offset != rows.front().time.offset) {
      throw DataError(r.where + ": UTC offset " + format_timestamp(r.time.utc, r.time.offset) +
                      " differs from " + rows.front().where +
                      " (daylight-saving transitions are not supported; use a fixed offset)");
    }
  }
  return rows;
}

}  // namespace

MarketData load_market_csv(std::span<const std::filesystem::path> paths,
                           const Timeline& timeline) {
  if (!timeline.valid()) throw ConfigError("timeline must cover at least one hour");
  const auto rows = read_all(paths);

  // [segment][forecast?] -> value per period, plus the row that set it.
  std::array<std::array<std::vector<std::optional<double>>, 2>, kSegmentCount> series;
  std::array<std::array<std::vector<const Row*>, 2>, kSegmentCount> origin;
  for (const auto s : kAllSegments) {
    for (int k = 0; k < 2; ++k) {
      series[index_of(s)][k].assign(timeline.periods(s), std::nullopt);
      origin[index_of(s)][k].assign(timeline.periods(s), nullptr);
    }
  }

  for (const auto& r : rows) {
    const auto step = r.segment == MarketSegment::Daa ? chr::seconds{3600} : chr::seconds{900};
    const auto delta = r.time.utc - timeline.start();
    if (delta % step != chr::seconds{0}) {
      throw DataError(r.where + ": " + std::string(to_string(r.segment)) + " timestamp " +
                      format_timestamp(r.time.utc, r.time.offset) +
                      " is not aligned to the delivery grid");
    }
    if (delta < chr::seconds{0}) continue;
    const auto index = static_cast<std::size_t>(delta / step);
    if (index >= timeline.periods(r.segment)) continue;
    auto& slot = series[index_of(r.segment)][r.forecast ? 1 : 0][index];
    auto& from = origin[index_of(r.segment)][r.forecast ? 1 : 0][index];
    if (slot) {
      throw DataError(r.where + ": duplicate " + std::string(to_string(r.segment)) +
                      (r.forecast ? " forecast" : "") + " row for " +
                      format_timestamp(r.time.utc, r.time.offset) + " (first at " + from->where +
                      ")");
    }
    slot = r.price;
    from = &r;
  }

  const auto offset = rows.front().time.offset;
  auto collect = [&](MarketSegment s, int k) -> std::optional<std::vector<double>> {
    const auto& src = series[index_of(s)][k];
    const bool any = std::any_of(src.begin(), src.end(), [](auto& v) { return v.has_value(); });
    if (!any && k == 1) return std::nullopt;
    std::vector<double> out(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!src[i]) {
        const auto t = s == MarketSegment::Daa ? timeline.hour_start(i) : timeline.quarter_start(i);
        throw DataError("missing " + std::string(to_string(s)) + (k == 1 ? " forecast" : "") +
                        " price for " + format_timestamp(t, offset) + " (" +
                        (s == MarketSegment::Daa ? "hour " : "quarter ") + std::to_string(i) +
                        ")");
      }
      out[i] = *src[i];
    }
    return out;
  };

  MarketData data;
  data.timeline = timeline;
  data.daa_actual = *collect(MarketSegment::Daa, 0);
  data.ida_actual = *collect(MarketSegment::Ida, 0);
  data.id1_actual = *collect(MarketSegment::Idc, 0);
  data.daa_forecast = collect(MarketSegment::Daa, 1);
  data.ida_forecast = collect(MarketSegment::Ida, 1);
  data.id1_forecast = collect(MarketSegment::Idc, 1);
  data.validate();
  return data;
}

MarketData load_market_csv(const std::filesystem::path& path, const Timeline& timeline) {
  return load_market_csv(std::span<const std::filesystem::path>(&path, 1), timeline);
}

Timeline infer_timeline(std::span<const std::filesystem::path> paths) {
  const auto rows = read_all(paths);
  std::optional<chr::sys_seconds> first, last;
  for (const auto& r : rows) {
    if (r.segment != MarketSegment::Daa || r.forecast) continue;
    if (!first || r.time.utc < *first) first = r.time.utc;
    if (!last || r.time.utc > *last) last = r.time.utc;
  }
  if (!first) throw DataError("market data has no actual DAA rows");
  const auto span = *last - *first;
  if (span % chr::hours{1} != chr::seconds{0}) {
    throw DataError("DAA rows are not on an hourly grid");
  }
  return Timeline(*first, static_cast<std::size_t>(span / chr::hours{1}) + 1,
                  rows.front().time.offset);
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_market_csv(const MarketData& data, std::ostream& out) {
  const auto& tl = data.timeline;
  out << "timestamp,segment,price_eur_mwh,kind\n";
  auto emit = [&](MarketSegment s, const std::vector<double>& v, const char* kind) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto t = s == MarketSegment::Daa ? tl.hour_start(i) : tl.quarter_start(i);
      out << format_timestamp(t, tl.utc_offset()) << ',' << to_string(s) << ',' << shortest(v[i])
          << ',' << kind << '\n';
    }
  };
  for (const auto s : kAllSegments) emit(s, data.actual(s), "actual");
  for (const auto s : kAllSegments) {
    if (data.forecast(s)) emit(s, *data.forecast(s), "forecast");
  }
}

std::vector<double> perfect_forecast(std::span<const double> actual) {
  return {actual.begin(), actual.end()};
}

std::vector<double> noisy_id1_forecast(std::span<const double> actual, double sigma,
                                       std::uint64_t seed, std::uint64_t stream) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw ConfigError("forecast noise sigma must be finite and >= 0");
  }
  std::vector<double> out(actual.begin(), actual.end());
  if (sigma == 0.0) return out;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> eps(0.0, 1.0);
  for (auto& v : out) v *= 1.0 + sigma * eps(rng);
  return out;
}

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("forecast has " + std::to_string(a.size()) + " values, actual " +
                          std::to_string(b.size()));
  }
  if (a.empty()) throw ValidationError("error metrics need at least one value");
}

}  // namespace

double mae(std::span<const double> forecast, std::span<const double> actual) {
  check_pair(forecast, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(forecast[i] - actual[i]);
  return sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> forecast, std::span<const double> actual) {
  check_pair(forecast, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = forecast[i] - actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(actual.size()));
}

}  // namespace cascade
