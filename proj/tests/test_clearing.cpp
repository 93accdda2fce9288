#include <gtest/gtest.h>

#include "testkit.hpp"
#include "zonalsim/clearing.hpp"
#include "zonalsim/lp.hpp"

using namespace zonalsim;

TEST(Clearing, TwoBusZonalSplitsPrices) {
    auto inst = testkit::two_bus();
    auto r = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    EXPECT_NEAR(r.dispatch.at("gen-north")[0], 50.0, 1e-6);
    EXPECT_NEAR(r.dispatch.at("gen-south")[0], 70.0, 1e-6);
    EXPECT_NEAR(r.prices[0][0], 10.0, 1e-6);
    EXPECT_NEAR(r.prices[1][0], 50.0, 1e-6);
    EXPECT_NEAR(r.flows.at(0)[0], 50.0, 1e-6);
    auto rent = congestion_rent(r, inst.day, inst.topo);
    EXPECT_NEAR(rent.intra[0], 1000.0, 1e-6);
}

TEST(Clearing, TwoBusNationalSinglePrice) {
    auto inst = testkit::two_bus();
    auto r = clear(inst.day, inst.topo, Design::National, 1.0);
    EXPECT_NEAR(r.dispatch.at("gen-north")[0], 100.0, 1e-6);
    EXPECT_NEAR(r.dispatch.at("gen-south")[0], 20.0, 1e-6);
    ASSERT_EQ(r.prices.size(), 1u);
    EXPECT_NEAR(r.prices[0][0], 50.0, 1e-6);
}

TEST(Clearing, UnconstrainedLinkMatchesNational) {
    auto inst = testkit::two_bus(1, Capacity::unlimited());
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    EXPECT_NEAR(z.prices[0][0], 50.0, 1e-6);
    EXPECT_NEAR(z.prices[1][0], 50.0, 1e-6);
    EXPECT_NEAR(z.objective, n.objective, 1e-6);
    EXPECT_NEAR(z.dispatch.at("gen-north")[0], 100.0, 1e-6);
    auto rent = congestion_rent(z, inst.day, inst.topo);
    EXPECT_NEAR(rent.intra[0], 0.0, 1e-9);
}

TEST(Clearing, ObjectiveIsUnperturbedCost) {
    auto inst = testkit::two_bus();
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    EXPECT_NEAR(n.objective, (100 * 10 + 20 * 50) * 0.5, 1e-9);
}

TEST(Clearing, ZeroFlowMeansZeroRent) {
    auto inst = testkit::two_bus();
    inst.day.load["S"] = Series(1, 0.0);
    inst.day.load["N"] = Series(1, 0.0);
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    auto rent = congestion_rent(z, inst.day, inst.topo);
    EXPECT_DOUBLE_EQ(rent.intra[0], 0.0);
}

TEST(Clearing, NodalEqualsZonalForOneBusZones) {
    auto inst = testkit::two_bus(3);
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    auto b = clear(inst.day, inst.topo, Design::Nodal, 1.0);
    EXPECT_NEAR(z.objective, b.objective, 1e-9);
    EXPECT_NEAR(b.prices[0][2], 10.0, 1e-6);
}

TEST(Clearing, TuningFactorScalesBoundaryLinks) {
    auto inst = testkit::two_bus();
    auto z = clear(inst.day, inst.topo, Design::Zonal, 0.5);
    EXPECT_NEAR(z.flows.at(0)[0], 25.0, 1e-6);
    EXPECT_THROW(clear(inst.day, inst.topo, Design::Zonal, 0.0), std::invalid_argument);
}

TEST(Clearing, InfeasibleLoadThrows) {
    auto inst = testkit::two_bus();
    inst.day.load["S"] = Series(1, 500.0);
    EXPECT_THROW(clear(inst.day, inst.topo, Design::National, 1.0), InfeasibleError);
}

TEST(Clearing, StorageShiftsCheapEnergy) {
    NetworkTopology t;
    t.buses = {"A"};
    t.zones = {{"A", "Z1"}};
    t.bands = {{"A", Band::South}};
    Unit st;
    st.id = "bat";
    st.bus = "A";
    st.kind = UnitKind::Storage;
    st.tech = Tech::Battery;
    st.power_cap_mw = 20;
    st.energy_cap_mwh = 40;
    auto units = std::make_shared<UnitRegistry>(
        UnitRegistry{testkit::thermal("cheap", "A", 10), testkit::thermal("peak", "A", 80), st});
    auto d = testkit::blank_day(t, units, 2);
    d.availability["cheap"] = {100, 0};
    d.availability["peak"] = {200, 200};
    d.load["A"] = {50, 50};
    d.day_ahead_price_gb = {10, 80};
    testkit::plain_costs(d);
    auto r = clear(d, t, Design::National, 1.0);
    EXPECT_NEAR(r.dispatch.at("bat")[0], -20.0, 1e-6);
    EXPECT_NEAR(r.dispatch.at("bat")[1], 20.0, 1e-6);
    EXPECT_NEAR(r.soc.at("bat")[1], 20.0, 1e-6);
    EXPECT_NEAR(r.objective, (70 * 10 + 30 * 80) * 0.5, 1e-6);
}

TEST(Clearing, DailyQuotaIsExhausted) {
    NetworkTopology t;
    t.buses = {"A"};
    t.zones = {{"A", "Z1"}};
    t.bands = {{"A", Band::North}};
    Unit hydro = testkit::wind("hydro", "A", SubsidyScheme::ro(40.0));
    hydro.kind = UnitKind::DailyQuota;
    hydro.tech = Tech::Hydro;
    hydro.power_cap_mw = 40;
    hydro.daily_quota_mwh = 10;
    auto units = std::make_shared<UnitRegistry>(UnitRegistry{hydro, testkit::thermal("gas", "A", 50)});
    auto d = testkit::blank_day(t, units, 2);
    d.availability["hydro"] = {40, 40};
    d.availability["gas"] = {100, 100};
    d.load["A"] = {30, 30};
    d.day_ahead_price_gb = {50, 50};
    testkit::plain_costs(d);
    auto r = clear(d, t, Design::National, 1.0);
    const auto& q = r.dispatch.at("hydro");
    EXPECT_NEAR((q[0] + q[1]) * kPeriodHours, 10.0, 1e-6);
}

TEST(Clearing, InterconnectorValuationStaysConvex) {
    EXPECT_DOUBLE_EQ(ic_import_cost(100, 0.5), 200.0);
    EXPECT_DOUBLE_EQ(ic_export_revenue(100, 0.5), 50.0);
    EXPECT_DOUBLE_EQ(ic_import_cost(-10, 0.5), -5.0);
    EXPECT_DOUBLE_EQ(ic_export_revenue(-10, 0.5), -20.0);
    for (double p : {-40.0, -1.0, 0.0, 3.0, 90.0})
        EXPECT_GE(ic_import_cost(p, 0.97), ic_export_revenue(p, 0.97));
}

TEST(Clearing, TiesBrokenById) {
    auto tb = tie_breaks({testkit::thermal("b", "A", 1), testkit::thermal("a", "A", 1)}, 1e-7);
    EXPECT_LT(tb.at("a"), tb.at("b"));
    auto inst = testkit::two_bus(1, Capacity::unlimited());
    auto units = std::make_shared<UnitRegistry>(
        UnitRegistry{testkit::thermal("x-gas", "S", 50), testkit::thermal("a-gas", "S", 50)});
    inst.day = testkit::blank_day(inst.topo, units, 1);
    inst.day.availability["x-gas"] = {100};
    inst.day.availability["a-gas"] = {100};
    inst.day.load["S"] = {50};
    inst.day.day_ahead_price_gb = {50};
    testkit::plain_costs(inst.day);
    auto r = clear(inst.day, inst.topo, Design::National, 1.0);
    EXPECT_NEAR(r.dispatch.at("a-gas")[0], 50.0, 1e-6);
    EXPECT_NEAR(r.dispatch.at("x-gas")[0], 0.0, 1e-6);
}

TEST(Classification, Cases) {
    PriceSetter gas{"gas", Tech::Gas, 90};
    PriceSetter wind{"wind", Tech::Wind, -48};
    EXPECT_EQ(classify_period({85, 85, 85}, gas), WindCase::Low);
    EXPECT_EQ(classify_period({0, 90}, gas), WindCase::High);
    EXPECT_EQ(classify_period({-48, 90}, wind), WindCase::Extreme);
    EXPECT_EQ(classify_period({85, 85.5}, wind), WindCase::Low);
}

TEST(Classification, NationalSetterOnTwoBus) {
    auto inst = testkit::two_bus();
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    auto s = national_price_setter(n, inst.day, 0);
    EXPECT_EQ(s.unit, "gen-south");
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    EXPECT_EQ(classify_period({z.prices[0][0], z.prices[1][0]}, s), WindCase::High);
}

// Property: random micro instances agree with exhaustive vertex enumeration.
TEST(ClearingProperty, MatchesVertexOracle) {
    int feasible = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto inst = testkit::micro_instance(seed);
        for (Design d : {Design::National, Design::Zonal, Design::Nodal}) {
            auto want = testkit::vertex_oracle(inst.day, inst.topo, d);
            if (!want) {
                EXPECT_THROW(clear(inst.day, inst.topo, d, 1.0), InfeasibleError) << "seed " << seed;
                continue;
            }
            ++feasible;
            auto got = clear(inst.day, inst.topo, d, 1.0);
            EXPECT_NEAR(got.objective, *want, 1e-6 * std::max(1.0, std::abs(*want))) << "seed " << seed;
        }
    }
    EXPECT_GT(feasible, 300);
}
