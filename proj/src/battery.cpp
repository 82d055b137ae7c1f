#include "cascade/battery.hpp"

#include <cmath>
#include <string>

#include "cascade/error.hpp"
#include "cascade/timeline.hpp"

namespace cascade {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid battery parameters: ") + what);
}

}  // namespace

void BatteryParams::validate() const {
  require(std::isfinite(p_max) && p_max > 0.0, "p_max must be > 0");
  require(std::isfinite(e_max) && e_max > 0.0, "e_max must be > 0");
  require(eta_ch > 0.0 && eta_ch <= 1.0, "eta_ch must lie in (0, 1]");
  require(eta_dis > 0.0 && eta_dis <= 1.0, "eta_dis must lie in (0, 1]");
  require(gamma_month >= 0.0 && gamma_month < 1.0, "gamma_month must lie in [0, 1)");
  require(std::isfinite(n_cyc) && n_cyc > 0.0, "n_cyc must be > 0");
  require(e_init >= 0.0 && e_init <= e_max, "e_init must lie in [0, e_max]");
}

double BatteryParams::gamma() const { return gamma_per_step(gamma_month, 1.0); }

double BatteryParams::retention(double dt) const {
  if (gamma_month == 0.0) return 1.0;
  // (1 - gamma)^dt == (1 - gamma_month)^(dt / 730)
  return std::pow(1.0 - gamma_month, dt / kHoursPerMonth);
}

double BatteryParams::cycle_budget(double periods, double periods_per_day) const {
  return e_max * n_cyc * periods / periods_per_day;
}

double gamma_per_step(double gamma_month, double dt) {
  if (!(gamma_month >= 0.0 && gamma_month < 1.0)) {
    throw ConfigError("gamma_month must lie in [0, 1), got " + std::to_string(gamma_month));
  }
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (gamma_month == 0.0) return 0.0;
  return -std::expm1(std::log1p(-gamma_month) / kHoursPerMonth);
}

double step_soc(double e, double p_ch, double p_dis, double dt, const BatteryParams& params) {
  return e * params.retention(dt) + p_ch * params.eta_ch * dt - p_dis * dt / params.eta_dis;
}

double hourly_power_weight(const BatteryParams& params) {
  if (params.gamma_month == 0.0) return 1.0;
  const double r = params.retention(kQuarterResolution);
  double sum = 0.0;
  double rk = 1.0;
  for (std::size_t k = 0; k < kQuartersPerHour; ++k) {
    sum += rk;
    rk *= r;
  }
  return kQuarterResolution * sum;
}

double full_equivalent_cycles(double charge_energy_stored, const BatteryParams& params) {
  return charge_energy_stored / params.e_max;
}

}  // namespace cascade
