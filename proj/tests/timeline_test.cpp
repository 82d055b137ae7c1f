#include <gtest/gtest.h>

#include "cascade/error.hpp"
#include "cascade/timeline.hpp"
#include "support/synthetic.hpp"

namespace cascade {
namespace {

using Kind = TradingEvent::Kind;

TEST(Timeline, ResolutionsPerSegment) {
  EXPECT_EQ(resolution_hours(MarketSegment::Daa), 1.0);
  EXPECT_EQ(resolution_hours(MarketSegment::Ida), 0.25);
  EXPECT_EQ(resolution_hours(MarketSegment::Idc), 0.25);
}

TEST(Timeline, QuartersAreFourPerHour) {
  const auto tl = testing::test_timeline(37);
  EXPECT_EQ(tl.quarters(), 148u);
  EXPECT_EQ(tl.periods(MarketSegment::Daa), 37u);
  EXPECT_EQ(tl.periods(MarketSegment::Idc), 148u);
}

TEST(Timeline, ZeroHoursIsAConfigError) {
  EXPECT_THROW(Timeline(std::chrono::sys_seconds{}, 0), ConfigError);
}

TEST(Timeline, HourOfQuarter) {
  const auto tl = testing::test_timeline(24);
  EXPECT_EQ(tl.hour_of_quarter(0), 0u);
  EXPECT_EQ(tl.hour_of_quarter(7), 1u);
  EXPECT_EQ(tl.hour_of_quarter(95), 23u);
  EXPECT_THROW(tl.hour_of_quarter(96), IndexError);
}

TEST(Timeline, EveryHourOwnsFourQuarters) {
  const auto tl = testing::test_timeline(10);
  std::vector<int> owned(10, 0);
  for (std::size_t q = 0; q < tl.quarters(); ++q) ++owned[tl.hour_of_quarter(q)];
  for (int n : owned) EXPECT_EQ(n, 4);
}

TEST(EventCalendar, OneDayWithFullHorizon) {
  const auto events = build_event_calendar(testing::test_timeline(24), 96);
  ASSERT_EQ(events.size(), 98u);
  EXPECT_EQ(events[0].kind, Kind::DaaAuction);
  EXPECT_EQ(events[0].window_length, 24u);
  EXPECT_EQ(events[1].kind, Kind::IdaAuction);
  EXPECT_EQ(events[1].window_length, 96u);
  EXPECT_EQ(events.back().kind, Kind::IdcQuarter);
  EXPECT_EQ(events.back().window_length, 1u);
}

TEST(EventCalendar, WindowsClampAtTheEnd) {
  const auto events = build_event_calendar(testing::test_timeline(1), 96);
  ASSERT_EQ(events.size(), 6u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(events[2 + i].fire_index, i);
    EXPECT_EQ(events[2 + i].window_begin, i);
    EXPECT_EQ(events[2 + i].window_length, 4 - i);
  }
}

TEST(EventCalendar, TwoDaysFirstWindowIsFullHorizon) {
  const auto events = build_event_calendar(testing::test_timeline(48), 96);
  EXPECT_EQ(events[2].fire_index, 0u);
  EXPECT_EQ(events[2].window_length, 96u);
  EXPECT_EQ(events[2 + 100].window_length, 92u);
}

TEST(EventCalendar, TotallyOrdered) {
  const auto events = build_event_calendar(testing::test_timeline(5), 7);
  ASSERT_EQ(events.size(), 22u);
  for (std::size_t i = 3; i < events.size(); ++i) {
    EXPECT_EQ(events[i].kind, Kind::IdcQuarter);
    EXPECT_GT(events[i].fire_index, events[i - 1].fire_index);
    EXPECT_LE(events[i].window_length, 7u);
  }
}

TEST(EventCalendar, RejectsZeroHorizonAndInvalidTimeline) {
  EXPECT_THROW(build_event_calendar(testing::test_timeline(1), 0), ConfigError);
  EXPECT_THROW(build_event_calendar(Timeline{}, 4), ConfigError);
}

}  // namespace
}  // namespace cascade
