#pragma once

#include <vector>

#include "cascade/battery.hpp"

namespace cascade::testing {

// Minimum of sum_h price[h] * (ch[h] - dis[h]) over hourly schedules of a
// battery without self-discharge and without a cycle limit, by dynamic
// programming over SOC values k * delta. Exact whenever e_init, e_max,
// p_max * eta_ch and p_max / eta_dis are integer multiples of delta.
double dp_schedule_optimum(const std::vector<double>& prices, const BatteryParams& params,
                           double delta, double dt = 1.0);

}  // namespace cascade::testing
