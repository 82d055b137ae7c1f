#include "support/synthetic.hpp"

#include <cmath>
#include <random>

namespace cascade::testing {

namespace chr = std::chrono;

Timeline test_timeline(std::size_t hours) {
  const auto local = chr::sys_days{chr::year{2023} / 3 / 1};
  return Timeline(chr::sys_seconds{local} - chr::hours{1}, hours, chr::minutes{60});
}

namespace {

double bump(double h, double centre, double width) {
  const double z = (h - centre) / width;
  return std::exp(-z * z);
}

}  // namespace

MarketData synthetic_market(std::size_t days, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  MarketData d;
  d.timeline = test_timeline(days * 24);
  for (std::size_t day = 0; day < days; ++day) {
    const double level = 90.0 + 15.0 * n01(rng);
    const double morning = 30.0 + 10.0 * n01(rng);
    const double evening = 55.0 + 15.0 * n01(rng);
    const double solar = 45.0 + 15.0 * n01(rng);
    for (int h = 0; h < 24; ++h) {
      const double x = h + 0.5;
      const double p = level + morning * bump(x, 8.0, 2.0) + evening * bump(x, 19.0, 2.2) -
                       solar * bump(x, 13.5, 2.5) - 15.0 * bump(x, 3.5, 2.0) + 4.0 * n01(rng);
      d.daa_actual.push_back(std::round(p * 100.0) / 100.0);
    }
  }
  const std::size_t hours = d.daa_actual.size();
  for (std::size_t q = 0; q < 4 * hours; ++q) {
    const std::size_t h = q / 4;
    const double prev = d.daa_actual[h == 0 ? 0 : h - 1];
    const double next = d.daa_actual[h + 1 < hours ? h + 1 : h];
    const double ramp = 0.5 * (next - prev) * (static_cast<double>(q % 4) - 1.5) / 4.0;
    const double ida = d.daa_actual[h] + ramp + 6.0 * n01(rng);
    d.ida_actual.push_back(std::round(ida * 100.0) / 100.0);
    d.id1_actual.push_back(std::round((ida + 9.0 * n01(rng)) * 100.0) / 100.0);
  }
  return d;
}

MarketData flat_market(std::size_t hours, double price) {
  MarketData d;
  d.timeline = test_timeline(hours);
  d.daa_actual.assign(hours, price);
  d.ida_actual.assign(4 * hours, price);
  d.id1_actual.assign(4 * hours, price);
  return d;
}

}  // namespace cascade::testing
