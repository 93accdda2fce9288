#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/scenario.hpp"

namespace zonalsim {

struct CostConfig {
    double recurring_share = 0.5;
    int recurring_min_bids = 3;
    double roc_floor = 1.0;
    double dispatch_threshold = 0.10;  // share of MEL
    int srmc_window_days = 30;
    double kappa_srmc_floor = 1.0;
    bool apply_correction = true;
    double default_nuclear_floor = -77.29;
};

struct PriceObservation {
    double price = 0.0;
    bool dispatching = false;
};

enum class RocSource { ObservedRecurringBid, SampledFromCohort };

struct RocEstimate {
    std::string unit;
    double roc = 0.0;
    RocSource source = RocSource::ObservedRecurringBid;
};

struct MeritEntry {
    std::string unit;
    double bid = 0.0;
    double available_mw = 0.0;
    Tech tech = Tech::Wind;
    bool thermal = false;
};

using MeritOrder = std::vector<MeritEntry>;

struct DispatchRecord {
    std::string date;
    int period = 0;  // 0-based
    std::string unit;
    double mw = 0.0;
    double mel = 0.0;
    double gb_price = 0.0;
};

struct CostHistory {
    std::map<std::string, std::vector<double>> bid_history;
    std::vector<DispatchRecord> dispatch_history;
};

// Lowest price at which a unit was still dispatching.
double estimate_nuclear_floor(const std::vector<PriceObservation>& history);

// Every key of bid_history is an RO unit needing an estimate; an empty list
// means the unit is sampled from the cohort of recurring-bid estimates.
std::map<std::string, RocEstimate> infer_roc(
    const std::map<std::string, std::vector<double>>& bid_history, std::uint64_t seed,
    const CostConfig& cfg = {});

// Mean day-ahead price over dispatching periods; falls back to class_mean.
double estimate_thermal_srmc(const std::vector<PriceObservation>& window,
                             std::optional<double> class_mean);

double correction_factor(const MeritOrder& order, double total_load, double day_ahead_price,
                         const CostConfig& cfg = {});

// Ascending by bid, ties by unit id. Requires scenario.marginal_costs.
std::vector<MeritOrder> build_merit_order(const DayScenario& s);

// Sorts one period's entries into merit order.
void sort_merit_order(MeritOrder& order);

struct CostInputs {
    std::map<std::string, RocEstimate> rocs;
    double nuclear_floor = -77.29;
    const std::vector<DispatchRecord>* dispatch_history = nullptr;
    CostConfig config;
};

// Derives run-level inputs (ROCs, nuclear floor) from the bundle history.
CostInputs prepare_cost_inputs(const UnitRegistry& units, const CostHistory& history,
                               std::uint64_t seed, const CostConfig& cfg = {});

// Fills s.marginal_costs for every generator and storage unit.
void apply_cost_model(DayScenario& s, const CostInputs& in);

// Bid of a generator unit at period t under the filled cost curves.
double unit_bid(const DayScenario& s, const std::string& unit, int t);

// Copy of the registry with every inferred ROC written into the unit's
// subsidy value.
UnitRegistry with_inferred_rocs(const UnitRegistry& units,
                                const std::map<std::string, RocEstimate>& rocs);

}  // namespace zonalsim
