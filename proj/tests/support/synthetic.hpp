#pragma once

#include <cstdint>

#include "cascade/data_io.hpp"

namespace cascade::testing {

// Starts 2023-03-01 00:00 at UTC+01:00.
Timeline test_timeline(std::size_t hours);

// Prices with a morning and an evening peak and a midday trough, varying from
// day to day. IDA adds an intra-hour ramp and noise; ID1 adds further noise.
MarketData synthetic_market(std::size_t days, std::uint64_t seed);

MarketData flat_market(std::size_t hours, double price);

}  // namespace cascade::testing
