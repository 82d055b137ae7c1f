#pragma once

#include <vector>

namespace cascade {

// Hours per month used to convert the monthly self-discharge rate (365*24/12).
inline constexpr double kHoursPerMonth = 730.0;

struct BatteryParams {
  double p_max = 10.0;        // MW, charge and discharge limit
  double e_max = 10.0;        // MWh
  double eta_ch = 0.95;
  double eta_dis = 0.95;
  double gamma_month = 0.03;  // fraction of stored energy lost per month
  double n_cyc = 2.0;         // full equivalent cycles per day
  double e_init = 0.0;        // MWh

  // Throws ConfigError naming the first violated limit.
  void validate() const;

  // Hourly self-discharge rate derived from gamma_month.
  double gamma() const;
  // Fraction of stored energy kept after dt hours, (1 - gamma)^dt.
  double retention(double dt) const;
  // Charge (or discharge) volume allowed over `periods` delivery periods of
  // which `periods_per_day` make up one day: E_max * n_cyc * periods / day.
  double cycle_budget(double periods, double periods_per_day) const;
};

// Hourly rate gamma with (1 - gamma)^730 == 1 - gamma_month. dt only has to be
// positive; the dynamics raise the retention to the power dt.
double gamma_per_step(double gamma_month, double dt);

// e * (1 - gamma)^dt + p_ch * eta_ch * dt - p_dis * dt / eta_dis. No clamping.
double step_soc(double e, double p_ch, double p_dis, double dt, const BatteryParams& params);

// Weight on the power terms of an hourly step so that it lands exactly where
// four consecutive quarter-hour steps at constant power land. 1 when gamma = 0.
double hourly_power_weight(const BatteryParams& params);

double full_equivalent_cycles(double charge_energy_stored, const BatteryParams& params);

struct SocTrajectory {
  std::vector<double> values;  // E[0..T]

  double initial() const { return values.front(); }
  double final() const { return values.back(); }
  std::size_t periods() const { return values.empty() ? 0 : values.size() - 1; }
};

}  // namespace cascade
