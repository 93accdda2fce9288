#include <gtest/gtest.h>

#include "testkit.hpp"
#include "zonalsim/welfare.hpp"

using namespace zonalsim;

TEST(Seb, TwoBusBothMethodsAgree) {
    auto inst = testkit::two_bus();
    inst.day.observed_balancing.accepted_offers = {{80, 100}};
    inst.day.observed_balancing.accepted_bids = {{10, 100}};
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto z = testkit::run_design(inst.day, inst.topo, Design::Zonal);
    auto wn = design_welfare(n, inst.day, inst.topo, 30.0);
    auto wz = design_welfare(z, inst.day, inst.topo, 30.0);
    auto c = seb_bottom_up(wn, wz);
    EXPECT_DOUBLE_EQ(c.export_revenue_delta, 0.0);
    EXPECT_DOUBLE_EQ(c.import_cost_delta, 0.0);
    EXPECT_DOUBLE_EQ(c.ic_rent_delta, 0.0);
    // the zonal design avoids the markup on 25 MWh of upward redispatch
    EXPECT_NEAR(c.total_bottom_up(), 30.0 * 25.0, 1e-6);

    auto Ln = settle(n, inst.day, inst.topo);
    auto Lz = settle(z, inst.day, inst.topo);
    const double saving = consumer_costs(Ln).total() - consumer_costs(Lz).total();
    double surplus = 0.0;
    for (const auto& u : *inst.day.units)
        surplus += unit_surplus(u, Lz, z, inst.day, 30.0).total() -
                   unit_surplus(u, Ln, n, inst.day, 30.0).total();
    EXPECT_NEAR(seb_top_down(saving, surplus, 0.0), c.total_bottom_up(), 1e-6);
}

TEST(Seb, UncongestedIsZero) {
    auto inst = testkit::two_bus(2, Capacity::unlimited());
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto z = testkit::run_design(inst.day, inst.topo, Design::Zonal);
    auto c = seb_bottom_up(design_welfare(n, inst.day, inst.topo, 30.0),
                           design_welfare(z, inst.day, inst.topo, 30.0));
    EXPECT_NEAR(c.total_bottom_up(), 0.0, 1e-9);
}

TEST(Seb, IcRentComponentIsHalved) {
    DesignWelfare n, z;
    z.ic_rent = 100.0;
    auto a = seb_bottom_up(n, z);
    z.ic_rent = 200.0;
    auto b = seb_bottom_up(n, z);
    EXPECT_DOUBLE_EQ(a.ic_rent_delta, 50.0);
    EXPECT_DOUBLE_EQ(b.ic_rent_delta, 100.0);
    EXPECT_DOUBLE_EQ(b.total_bottom_up() - a.total_bottom_up(), 50.0);
}

TEST(Regression, PlantedLine) {
    std::vector<std::pair<double, double>> pairs;
    for (double x : {100.0, 250.0, 400.0, 800.0}) pairs.push_back({x, 3.0 * x + 7.0});
    auto r = curtailment_regression(pairs, 5.0);
    EXPECT_NEAR(r.slope, 3.0, 1e-12);
    EXPECT_NEAR(r.intercept, 7.0, 1e-9);
    EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(r.projected_annual, 12.0 * (7.0 + 3.0 * 5.0 * 387.5), 1e-6);
}

TEST(Regression, Degenerate) {
    EXPECT_THROW(curtailment_regression({{5, 1}, {5, 2}, {5, 3}}, 5.0), std::invalid_argument);
    EXPECT_THROW(curtailment_regression({{1, 1}, {2, 2}}, 5.0), std::invalid_argument);
}

TEST(RegressionProperty, ShiftMovesInterceptOnly) {
    std::vector<std::pair<double, double>> pairs{{10, 3}, {20, 11}, {35, 12}, {50, 30}};
    auto a = curtailment_regression(pairs, 1.0);
    for (auto& p : pairs) p.second += 1000.0;
    auto b = curtailment_regression(pairs, 1.0);
    EXPECT_NEAR(a.slope, b.slope, 1e-12);
    EXPECT_NEAR(b.intercept - a.intercept, 1000.0, 1e-9);
}

TEST(UnlockedWind, LinearInExtraWind) {
    auto inst = testkit::two_bus();
    auto units = std::make_shared<UnitRegistry>(UnitRegistry{testkit::wind("w", "N", SubsidyScheme::none())});
    DayScenario s;
    s.units = units;
    ClearingResult n, z;
    n.dispatch["w"] = {100.0, 100.0};
    z.dispatch["w"] = {100.0, 100.0};
    EXPECT_DOUBLE_EQ(unlocked_wind(n, z, s).energy_mwh, 0.0);
    EXPECT_DOUBLE_EQ(unlocked_wind(n, z, s).co2_tonnes, 0.0);
    z.dispatch["w"] = {100.0 + 100000.0, 100.0 + 100000.0};  // +100 GWh
    auto u = unlocked_wind(n, z, s);
    EXPECT_DOUBLE_EQ(u.energy_mwh, 100000.0);
    EXPECT_DOUBLE_EQ(u.co2_tonnes, 100000.0 * kGasEmissionFactor);
    z.dispatch["w"] = {0.0, 0.0};
    EXPECT_DOUBLE_EQ(unlocked_wind(n, z, s).energy_mwh, 0.0);
}

TEST(Curtailment, MarketAndRedispatch) {
    auto units = std::make_shared<UnitRegistry>(UnitRegistry{testkit::wind("w", "N", SubsidyScheme::none())});
    DayScenario s;
    s.units = units;
    s.availability["w"] = {100.0};
    DesignOutcome d;
    d.wholesale.dispatch["w"] = {80.0};
    d.actual.dispatch["w"] = {50.0};
    EXPECT_DOUBLE_EQ(market_curtailment(d, s), 10.0);
    EXPECT_DOUBLE_EQ(redispatch_curtailment(d, s), 15.0);
}
