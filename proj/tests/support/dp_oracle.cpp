#include "support/dp_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cascade::testing {

double dp_schedule_optimum(const std::vector<double>& prices, const BatteryParams& params,
                           double delta, double dt) {
  if (params.gamma_month != 0.0) throw std::invalid_argument("oracle assumes no self-discharge");
  const auto n = static_cast<long>(std::llround(params.e_max / delta));
  const auto start = static_cast<long>(std::llround(params.e_init / delta));
  const auto up = static_cast<long>(std::floor(params.p_max * params.eta_ch * dt / delta + 1e-9));
  const auto down =
      static_cast<long>(std::floor(params.p_max * dt / params.eta_dis / delta + 1e-9));
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> cost(static_cast<std::size_t>(n + 1), kInf);
  cost[static_cast<std::size_t>(start)] = 0.0;
  for (const double c : prices) {
    std::vector<double> next(cost.size(), kInf);
    for (long i = 0; i <= n; ++i) {
      const double here = cost[static_cast<std::size_t>(i)];
      if (here == kInf) continue;
      for (long j = std::max(0L, i - down); j <= std::min(n, i + up); ++j) {
        const double stored = static_cast<double>(j - i) * delta;
        // Buying raises the SOC by eta_ch per MWh, selling lowers it by 1/eta_dis.
        const double traded = stored >= 0 ? stored / params.eta_ch : stored * params.eta_dis;
        const double total = here + c * traded;
        auto& slot = next[static_cast<std::size_t>(j)];
        if (total < slot) slot = total;
      }
    }
    cost.swap(next);
  }
  double best = kInf;
  for (const double v : cost) best = std::min(best, v);
  return best;
}

}  // namespace cascade::testing
