#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/calibration.hpp"
#include "zonalsim/cost_model.hpp"
#include "zonalsim/ingestion.hpp"
#include "zonalsim/policy.hpp"
#include "zonalsim/settlement.hpp"
#include "zonalsim/welfare.hpp"

namespace zonalsim {

struct RunConfig {
    std::filesystem::path bundle;
    std::optional<std::string> from, to;
    std::vector<Design> designs{Design::National, Design::Zonal};
    std::optional<int> policy;  // 1, 2 or 3
    double rent_share = 1.0;
    double markup = 30.0;       // GBP/MWh
    std::uint64_t seed = 0;
    int jobs = 1;
    std::filesystem::path out;
    bool fail_fast = false;
    bool calibrate = true;      // otherwise tau = fixed_tau
    double fixed_tau = 1.0;
    double regression_scale = 5.0;
    double emission_factor = kGasEmissionFactor;
    CostConfig cost;
    CalibrationConfig calibration;
};

// Throws ConfigError-style std::invalid_argument on bad values.
void validate_run_config(const RunConfig& cfg);

struct DesignDay {
    Design design = Design::National;
    double objective = 0.0;
    ConsumerCostStack consumer;
    std::vector<std::string> regions;
    std::vector<Series> prices;  // [region][period]
    double volume_up = 0.0, volume_down = 0.0;
    double bm_cost = 0.0;
    int exhausted_warnings = 0;
    double rent_intra = 0.0, rent_ic = 0.0, ic_trade = 0.0;
    double market_curtailment = 0.0, redispatch_curtailment = 0.0;  // MWh
    DesignWelfare welfare;
    std::map<std::string, UnitSurplus> surplus;  // generators and storage
};

struct DayResult {
    std::string date;
    std::optional<std::string> error;
    CalibrationResult calibration;
    double tau = 1.0;
    std::vector<DesignDay> designs;
    std::vector<WindCase> classification;          // national and zonal both run
    std::optional<SebComponents> seb;
    UnlockedWind unlocked;
    std::map<std::string, double> ftr_spread;      // zonal schedule x (P_ref - P_zone) x dt
    std::map<std::string, double> zone_load_mwh;   // for load weighting

    const DesignDay* find(Design d) const;
};

struct MonthRow {
    std::string month;
    int days = 0;
    std::map<Design, ConsumerCostStack> consumer;
    std::optional<SebComponents> seb;
    double curtailment_national_mwh = 0.0;  // scheduled then redispatched away
    double curtailment_zonal_mwh = 0.0;     // available but unscheduled
    UnlockedWind unlocked;
};

struct RunResults {
    RunConfig config;
    std::vector<DayResult> days;  // ascending by date
    std::vector<MonthRow> months;
    std::vector<ProducerSurplus> producers;
    std::map<std::string, std::string> unit_zone;
    std::map<std::string, Tech> unit_tech;
    std::optional<PolicyOutcome> policy;
    std::optional<Regression> regression;
    std::optional<std::string> regression_note;
    std::map<Design, std::map<std::string, double>> volatility;  // region -> sd
    UnlockedWind unlocked;
    std::map<std::string, int> class_counts;
    int failed_days = 0;
    int exhausted_warnings = 0;
    int calibration_warnings = 0;
    int policy_warnings = 0;
    std::vector<std::string> zonal_volume_above_national;  // dates, reported not enforced
};

using LogSink = std::function<void(const std::string&)>;

// One day through the whole pipeline. `units` must carry the inferred ROCs.
DayResult run_day(DayScenario day, const NetworkTopology& topo, const CostInputs& cost,
                  const std::shared_ptr<const UnitRegistry>& units, const RunConfig& cfg,
                  const LogSink& log = {});

// Days of an in-memory bundle, in parallel, merged by date.
RunResults run_bundle(const Bundle& bundle, const RunConfig& cfg, const LogSink& log = {});

// Loads cfg.bundle restricted to the configured range. Throws DataError when
// the range leaves the bundle's coverage.
Bundle load_run_bundle(const RunConfig& cfg);

RunResults run(const RunConfig& cfg, const LogSink& log = {});

// Calibration only, one result per day in range.
std::vector<CalibrationResult> calibrate_bundle(const Bundle& bundle, const RunConfig& cfg);

// Runs fn(0..n-1) on up to `jobs` threads; rethrows the first exception.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Run-level aggregation over finished days.
void summarize(RunResults& r, const UnitRegistry& units, const NetworkTopology& topo);

}  // namespace zonalsim
