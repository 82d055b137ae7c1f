/* C interface of the cascade battery trading backtester. */
#ifndef CASCADE_CASCADE_H
#define CASCADE_CASCADE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CASCADE_BUILDING_LIBRARY)
#    define CASCADE_API __declspec(dllexport)
#  else
#    define CASCADE_API __declspec(dllimport)
#  endif
#else
#  define CASCADE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cascade_status {
  CASCADE_OK = 0,
  CASCADE_ERR_CONFIG = 1,
  CASCADE_ERR_DATA = 2,
  CASCADE_ERR_VALIDATION = 3,
  CASCADE_ERR_SOLVER = 4,
  CASCADE_ERR_BOOKKEEPING = 5,
  CASCADE_ERR_IO = 6,
  CASCADE_ERR_INTERNAL = 7,
  CASCADE_ERR_ARGUMENT = 8
} cascade_status;

typedef struct cascade_config cascade_config;
typedef struct cascade_market cascade_market;
typedef struct cascade_portfolio cascade_portfolio;

/* Message of the last failed call on this thread; "" when none. */
CASCADE_API const char* cascade_last_error(void);
CASCADE_API const char* cascade_version(void);
CASCADE_API const char* cascade_status_name(cascade_status status);

/* Configuration: case-study defaults, a key = value file, single overrides. */
CASCADE_API cascade_status cascade_config_default(cascade_config** out);
CASCADE_API cascade_status cascade_config_load(const char* path, cascade_config** out);
CASCADE_API cascade_status cascade_config_set(cascade_config* config, const char* key,
                                              const char* value);
CASCADE_API void cascade_config_free(cascade_config* config);

/* Loads and aligns market CSV files to the configured (or inferred) timeline. */
CASCADE_API cascade_status cascade_market_load(const cascade_config* config,
                                               const char* const* paths, size_t n_paths,
                                               cascade_market** out);
/* Ingestion checks only, over the timeline the files span. */
CASCADE_API cascade_status cascade_market_validate(const char* const* paths, size_t n_paths,
                                                   size_t* hours_out);
CASCADE_API cascade_status cascade_market_info(const cascade_market* market, size_t* hours,
                                               size_t* quarters, int* has_forecast_daa,
                                               int* has_forecast_ida, int* has_forecast_idc);
CASCADE_API void cascade_market_free(cascade_market* market);

CASCADE_API cascade_status cascade_run(const cascade_config* config,
                                       const cascade_market* market, cascade_portfolio** out);
/* out[0..2] = DAA, IDA, IDC cash; out[3] = total, EUR. */
CASCADE_API cascade_status cascade_portfolio_revenue(const cascade_portfolio* portfolio,
                                                     double out[4]);
CASCADE_API cascade_status cascade_portfolio_trade_count(const cascade_portfolio* portfolio,
                                                         size_t* out);
/* Writes revenue.csv, daily_revenue.csv, trades.csv, soc.csv and
   traces/day_<date>.csv into out_dir (created if missing). */
CASCADE_API cascade_status cascade_portfolio_write_reports(const cascade_portfolio* portfolio,
                                                           const char* out_dir);
CASCADE_API void cascade_portfolio_free(cascade_portfolio* portfolio);

/* Runs the scenario ladder and writes sensitivity.csv,
   sensitivity_median.csv and sensitivity.txt into out_dir. */
CASCADE_API cascade_status cascade_sweep(const cascade_config* config,
                                         const cascade_market* market, const double* sigmas,
                                         size_t n_sigmas, const uint64_t* seeds, size_t n_seeds,
                                         unsigned threads, const char* out_dir);

/* event_id: "daa", "ida" or "idc:<quarter>". Earlier events are replayed so
   the dumped problem sees the book it would see in a run. */
CASCADE_API cascade_status cascade_dump_lp(const cascade_config* config,
                                           const cascade_market* market, const char* event_id,
                                           const char* out_path);

#ifdef __cplusplus
}
#endif

#endif
