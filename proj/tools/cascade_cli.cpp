// Command-line front end over the cascade C interface.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "cascade/cascade.h"

namespace {

constexpr int kExitUsage = 2;

int exit_code(cascade_status status) {
  switch (status) {
    case CASCADE_OK: return 0;
    case CASCADE_ERR_CONFIG:
    case CASCADE_ERR_DATA:
    case CASCADE_ERR_VALIDATION:
    case CASCADE_ERR_IO:
    case CASCADE_ERR_ARGUMENT: return 2;
    case CASCADE_ERR_SOLVER:
    case CASCADE_ERR_BOOKKEEPING: return 3;
    case CASCADE_ERR_INTERNAL: return 1;
  }
  return 1;
}

struct Failure {
  cascade_status status;
};

void check(cascade_status status) {
  if (status == CASCADE_OK) return;
  std::fprintf(stderr, "cascade: %s: %s\n", cascade_status_name(status), cascade_last_error());
  throw Failure{status};
}

struct Handles {
  cascade_config* config = nullptr;
  cascade_market* market = nullptr;
  cascade_portfolio* portfolio = nullptr;

  Handles() = default;
  Handles(const Handles&) = delete;
  Handles& operator=(const Handles&) = delete;
  ~Handles() {
    cascade_portfolio_free(portfolio);
    cascade_market_free(market);
    cascade_config_free(config);
  }
};

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded DAA / IDA / IDC battery trading backtester"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cascade_version()));

  std::string config_path;
  std::vector<std::string> data_paths;
  std::string out_dir;
  std::vector<double> sigmas;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 1;
  std::string event_id;
  std::string lp_path;

  auto* run = app.add_subcommand("run", "Run one backtest and write its reports");
  run->add_option("--config", config_path, "key = value configuration file");
  run->add_option("--data", data_paths, "market price CSV (repeatable)")->required();
  run->add_option("--out", out_dir, "report directory")->required();
  run->add_option("--sigma", sigmas, "ID1 forecast noise; implies forecast_idc = noisy")
      ->expected(0, 1);
  run->add_option("--seed", seeds, "noise seed")->expected(0, 1);

  auto* sweep = app.add_subcommand("sweep", "Run the forecast-uncertainty scenario ladder");
  sweep->add_option("--config", config_path, "key = value configuration file");
  sweep->add_option("--data", data_paths, "market price CSV (repeatable)")->required();
  sweep->add_option("--out", out_dir, "report directory")->required();
  sweep->add_option("--sigma", sigmas, "noise levels, e.g. 0.1 0.2 0.5 1.0")->delimiter(',');
  sweep->add_option("--seed", seeds, "noise seeds")->delimiter(',');
  sweep->add_option("--threads", threads, "scenarios run in parallel")->check(CLI::Range(1u, 256u));

  auto* validate = app.add_subcommand("validate", "Check market data files");
  validate->add_option("--data", data_paths, "market price CSV (repeatable)")->required();

  auto* dump = app.add_subcommand("dump-lp", "Write one event's optimisation in LP format");
  dump->add_option("--config", config_path, "key = value configuration file");
  dump->add_option("--data", data_paths, "market price CSV (repeatable)")->required();
  dump->add_option("--event", event_id, "daa, ida or idc:<quarter>")->required();
  dump->add_option("--out", lp_path, "output .lp file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Handles h;
    if (*validate) {
      const auto paths = c_strings(data_paths);
      std::size_t hours = 0;
      check(cascade_market_validate(paths.data(), paths.size(), &hours));
      std::printf("ok: %zu hours of DAA, IDA and IDC prices\n", hours);
      return 0;
    }

    if (config_path.empty()) check(cascade_config_default(&h.config));
    else check(cascade_config_load(config_path.c_str(), &h.config));

    if (*run) {
      if (!sigmas.empty()) {
        check(cascade_config_set(h.config, "forecast_idc", "noisy"));
        check(cascade_config_set(h.config, "sigma", exact(sigmas.front()).c_str()));
      }
      if (!seeds.empty()) {
        check(cascade_config_set(h.config, "seed", std::to_string(seeds.front()).c_str()));
      }
    }
    const auto paths = c_strings(data_paths);
    check(cascade_market_load(h.config, paths.data(), paths.size(), &h.market));

    if (*run) {
      check(cascade_run(h.config, h.market, &h.portfolio));
      check(cascade_portfolio_write_reports(h.portfolio, out_dir.c_str()));
      double revenue[4];
      check(cascade_portfolio_revenue(h.portfolio, revenue));
      std::printf("DAA %.2f EUR, IDA %.2f EUR, IDC %.2f EUR, total %.2f EUR\n", revenue[0],
                  revenue[1], revenue[2], revenue[3]);
    } else if (*sweep) {
      check(cascade_sweep(h.config, h.market, sigmas.data(), sigmas.size(), seeds.data(),
                          seeds.size(), threads, out_dir.c_str()));
      std::printf("sensitivity reports written to %s\n", out_dir.c_str());
    } else if (*dump) {
      check(cascade_dump_lp(h.config, h.market, event_id.c_str(), lp_path.c_str()));
    }
    return 0;
  } catch (const Failure& f) {
    return exit_code(f.status);
  }
}
