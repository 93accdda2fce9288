#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/cost_model.hpp"
#include "zonalsim/network.hpp"
#include "zonalsim/settlement.hpp"
#include "zonalsim/scenario.hpp"

namespace zonalsim::testkit {

struct Instance {
    NetworkTopology topo;
    DayScenario day;
};

// North bus N (zone Z1) feeding south bus S (zone Z2) over one link in
// boundary B6. North unit 100 MW at 10, south unit 100 MW at 50, 120 MW load
// at S. Thermal bids, day-ahead price 50.
Instance two_bus(int periods = 1, Capacity link = Capacity::limited(50.0));

// Fills every per-day map with constant values for the given units and topology.
DayScenario blank_day(const NetworkTopology& topo, std::shared_ptr<const UnitRegistry> units,
                      int periods, const std::string& date = "2024-03-21");

Unit thermal(const std::string& id, const std::string& bus, double cost);
Unit wind(const std::string& id, const std::string& bus, SubsidyScheme subsidy);

// Cost curves without correction.
void plain_costs(DayScenario& s);

}  // namespace zonalsim::testkit

namespace zonalsim::testkit {

// Exact optimum of a generator-only transport problem by enumerating every
// basic solution, period by period. Links inside a region are ignored and
// parallel links between regions add up. Boundaries must be absent.
// Returns nullopt when some period is infeasible.
std::optional<double> vertex_oracle(const DayScenario& s, const NetworkTopology& topo,
                                    Design design);

// Random micro instance: up to 3 buses, 4 generators, 2 periods.
Instance micro_instance(std::uint64_t seed);

}  // namespace zonalsim::testkit

namespace zonalsim::testkit {

// Clear, redispatch to nodal, attribute and price balancing, collect rent.
DesignOutcome run_design(const DayScenario& s, const NetworkTopology& topo, Design design,
                         double tau = 1.0);

}  // namespace zonalsim::testkit
