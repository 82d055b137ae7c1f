#pragma once

#include <chrono>
#include <cstddef>
#include <string_view>
#include <vector>

namespace cascade {

enum class MarketSegment { Daa = 0, Ida = 1, Idc = 2 };

inline constexpr std::size_t kSegmentCount = 3;
inline constexpr MarketSegment kAllSegments[kSegmentCount] = {
    MarketSegment::Daa, MarketSegment::Ida, MarketSegment::Idc};

inline constexpr double kHourlyResolution = 1.0;
inline constexpr double kQuarterResolution = 0.25;
inline constexpr std::size_t kQuartersPerHour = 4;
inline constexpr std::size_t kQuartersPerDay = 96;

constexpr std::size_t index_of(MarketSegment s) noexcept {
  return static_cast<std::size_t>(s);
}

// Delivery-period length in hours: DAA trades hours, IDA and IDC quarters.
constexpr double resolution_hours(MarketSegment s) noexcept {
  return s == MarketSegment::Daa ? kHourlyResolution : kQuarterResolution;
}

std::string_view to_string(MarketSegment s) noexcept;

// Delivery grid of a backtest window. The start instant is kept in UTC
// together with the fixed offset the input data was recorded in, so that
// reports can render local timestamps; nothing here interprets time zones.
class Timeline {
 public:
  using Instant = std::chrono::sys_seconds;

  Timeline() = default;
  // Throws ConfigError when hours == 0.
  Timeline(Instant start, std::size_t hours,
           std::chrono::minutes utc_offset = std::chrono::minutes{0});

  Instant start() const noexcept { return start_; }
  std::chrono::minutes utc_offset() const noexcept { return utc_offset_; }
  std::size_t hours() const noexcept { return hours_; }
  std::size_t quarters() const noexcept { return hours_ * kQuartersPerHour; }
  std::size_t periods(MarketSegment s) const noexcept {
    return s == MarketSegment::Daa ? hours() : quarters();
  }
  bool valid() const noexcept { return hours_ > 0; }

  // Throws IndexError for q outside [0, Q).
  std::size_t hour_of_quarter(std::size_t q) const;

  Instant quarter_start(std::size_t q) const noexcept {
    return start_ + std::chrono::minutes{15} * static_cast<long>(q);
  }
  Instant hour_start(std::size_t h) const noexcept {
    return start_ + std::chrono::hours{static_cast<long>(h)};
  }

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  Instant start_{};
  std::size_t hours_ = 0;
  std::chrono::minutes utc_offset_{0};
};

struct TradingEvent {
  enum class Kind { DaaAuction, IdaAuction, IdcQuarter };

  Kind kind = Kind::DaaAuction;
  // Quarter at which the event executes; both auctions fire at quarter 0.
  std::size_t fire_index = 0;
  // Delivery periods the event may trade, in the segment's own resolution.
  std::size_t window_begin = 0;
  std::size_t window_length = 0;

  MarketSegment segment() const noexcept;
  std::size_t window_end() const noexcept { return window_begin + window_length; }
};

// DAA over all hours, then IDA over all quarters, then one IDC event per
// quarter with a window of min(n_p, Q - q) quarters.
std::vector<TradingEvent> build_event_calendar(const Timeline& timeline,
                                               std::size_t n_p);

}  // namespace cascade
