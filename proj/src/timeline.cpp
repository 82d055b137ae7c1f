#include "cascade/timeline.hpp"

#include <algorithm>
#include <string>

#include "cascade/error.hpp"

namespace cascade {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::Solver: return "solver error";
    case ErrorKind::Bookkeeping: return "bookkeeping error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

std::string_view to_string(MarketSegment s) noexcept {
  switch (s) {
    case MarketSegment::Daa: return "DAA";
    case MarketSegment::Ida: return "IDA";
    case MarketSegment::Idc: return "IDC";
  }
  return "?";
}

Timeline::Timeline(Instant start, std::size_t hours, std::chrono::minutes utc_offset)
    : start_(start), hours_(hours), utc_offset_(utc_offset) {
  if (hours == 0) throw ConfigError("timeline must contain at least one hour");
}

std::size_t Timeline::hour_of_quarter(std::size_t q) const {
  if (q >= quarters()) {
    throw IndexError("quarter index " + std::to_string(q) + " outside [0, " +
                     std::to_string(quarters()) + ")");
  }
  return q / kQuartersPerHour;
}

MarketSegment TradingEvent::segment() const noexcept {
  switch (kind) {
    case Kind::DaaAuction: return MarketSegment::Daa;
    case Kind::IdaAuction: return MarketSegment::Ida;
    case Kind::IdcQuarter: return MarketSegment::Idc;
  }
  return MarketSegment::Idc;
}

std::vector<TradingEvent> build_event_calendar(const Timeline& timeline,
                                               std::size_t n_p) {
  if (!timeline.valid()) throw ConfigError("timeline must contain at least one hour");
  if (n_p == 0) throw ConfigError("prediction horizon n_p must be at least 1 quarter");

  const std::size_t quarters = timeline.quarters();
  std::vector<TradingEvent> events;
  events.reserve(quarters + 2);
  events.push_back({TradingEvent::Kind::DaaAuction, 0, 0, timeline.hours()});
  events.push_back({TradingEvent::Kind::IdaAuction, 0, 0, quarters});
  for (std::size_t q = 0; q < quarters; ++q) {
    events.push_back({TradingEvent::Kind::IdcQuarter, q, q, std::min(n_p, quarters - q)});
  }
  return events;
}

}  // namespace cascade
