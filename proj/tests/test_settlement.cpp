#include <gtest/gtest.h>

#include "testkit.hpp"
#include "zonalsim/settlement.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;

namespace {

// Two-bus example with a balancing stack priced at srmc + 30 for offers
// and srmc for bids.
testkit::Instance priced_two_bus() {
    auto inst = testkit::two_bus();
    inst.day.observed_balancing.accepted_offers = {{80, 100}};
    inst.day.observed_balancing.accepted_bids = {{10, 100}};
    return inst;
}

}  // namespace

TEST(CfdTopup, WorkedPeriod) {
    auto s = cfd_topup(57.5, {40.0}, {100.0});
    EXPECT_DOUBLE_EQ(s[0], 875.0);
}

TEST(CfdTopup, SuspendedFromThirteenthNegativePeriod) {
    Series price(20, -5.0), q(20, 10.0);
    auto s = cfd_topup(50.0, price, q);
    for (std::size_t t = 0; t < 12; ++t) EXPECT_DOUBLE_EQ(s[t], 55.0 * 10 * 0.5);
    for (std::size_t t = 12; t < 20; ++t) EXPECT_DOUBLE_EQ(s[t], 0.0);
}

TEST(CfdTopup, RunResetsOnNonNegativePrice) {
    Series price(30, -5.0), q(30, 10.0);
    price[10] = 1.0;
    auto s = cfd_topup(50.0, price, q);
    EXPECT_GT(s[22], 0.0);  // 12th period of the second run
    EXPECT_DOUBLE_EQ(s[23], 0.0);
}

TEST(CfdTopup, RevenueIsStrikeTimesVolume) {
    Series price{0, 12, 57.5, 90}, q{100, 100, 100, 100};
    auto s = cfd_topup(57.5, price, q);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(price[t] * q[t] * 0.5 + s[t], 57.5 * 100 * 0.5);
    EXPECT_DOUBLE_EQ(cfd_topup(57.5, {40}, {0})[0], 0.0);
}

TEST(Settlement, TwoBusConsumerStacks) {
    auto inst = priced_two_bus();
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto z = testkit::run_design(inst.day, inst.topo, Design::Zonal);
    auto cn = consumer_costs(settle(n, inst.day, inst.topo));
    auto cz = consumer_costs(settle(z, inst.day, inst.topo));
    // prices carry the id-ranked tie perturbation, below 1e-7 GBP/MWh
    EXPECT_NEAR(cn.wholesale_cost, 3000.0, 1e-5);
    EXPECT_NEAR(cn.bm_cost, 25 * 80 - 25 * 10, 1e-6);
    EXPECT_NEAR(cz.wholesale_cost, 3000.0, 1e-5);
    EXPECT_NEAR(cz.congestion_rent_income, 1000.0, 1e-6);
    EXPECT_NEAR(cz.bm_cost, 0.0, 1e-6);
    EXPECT_NEAR(cn.total() - cz.total(), cz.congestion_rent_income + cn.bm_cost - cz.bm_cost, 1e-6);
    EXPECT_NEAR(*cn.per_mwh(), cn.total() / 60.0, 1e-9);
}

TEST(Settlement, PerMwhUndefinedWithoutLoad) {
    ConsumerCostStack c;
    EXPECT_FALSE(c.per_mwh().has_value());
}

TEST(Settlement, RoPaidOnActualDispatch) {
    auto inst = priced_two_bus();
    auto units = std::make_shared<UnitRegistry>(*inst.day.units);
    units->push_back(testkit::wind("wind-north", "N", SubsidyScheme::ro(40.0)));
    inst.day.units = units;
    inst.day.availability["wind-north"] = {30.0};
    CostInputs in;
    apply_cost_model(inst.day, in);
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto L = settle(n, inst.day, inst.topo);
    const double actual = n.actual.dispatch.at("wind-north")[0];
    EXPECT_NEAR(L.ro_payment.at("wind-north")[0], 40.0 * actual * 0.5, 1e-9);
    EXPECT_NEAR(n.wholesale.dispatch.at("wind-north")[0], 30.0, 1e-6);
    EXPECT_NEAR(actual, 30.0, 1e-6);
}

TEST(Surplus, IdenticalDesignsChangeNothing) {
    auto inst = testkit::two_bus(1, Capacity::unlimited());
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto z = testkit::run_design(inst.day, inst.topo, Design::Zonal);
    const auto& u = inst.day.units->at(0);
    auto sn = unit_surplus(u, settle(n, inst.day, inst.topo), n, inst.day, 30.0);
    auto sz = unit_surplus(u, settle(z, inst.day, inst.topo), z, inst.day, 30.0);
    auto p = producer_surplus(u.id, sn, sz, 30.0);
    ASSERT_TRUE(p.percent_change.has_value());
    EXPECT_NEAR(*p.percent_change, 0.0, 1e-9);
    EXPECT_FALSE(producer_surplus("x", {}, sz, 30.0).percent_change.has_value());
}

TEST(Surplus, NorthLosesUnderZonalPricing) {
    auto inst = priced_two_bus();
    auto n = testkit::run_design(inst.day, inst.topo, Design::National);
    auto z = testkit::run_design(inst.day, inst.topo, Design::Zonal);
    const auto& north = inst.day.units->at(0);
    auto sn = unit_surplus(north, settle(n, inst.day, inst.topo), n, inst.day, 30.0);
    auto sz = unit_surplus(north, settle(z, inst.day, inst.topo), z, inst.day, 30.0);
    EXPECT_NEAR(sn.total(), (50 - 10) * 100 * 0.5, 1e-5);
    EXPECT_NEAR(sz.total(), 0.0, 1e-6);
    EXPECT_NEAR(*producer_surplus(north.id, sn, sz, 30.0).percent_change, -100.0, 1e-6);
}

TEST(Volatility, PopulationStandardDeviation) {
    EXPECT_DOUBLE_EQ(price_volatility({0, 10}), 5.0);
    EXPECT_DOUBLE_EQ(price_volatility({7, 7, 7}), 0.0);
    EXPECT_THROW(price_volatility({1}), std::invalid_argument);
}

// Property: consumers' wholesale payments equal producer revenue, interconnector
// trade and congestion rent in every period of every design.
TEST(SettlementProperty, MoneyIsConserved) {
    SyntheticConfig cfg;
    cfg.buses = 36;
    cfg.units = 60;
    cfg.days = 3;
    cfg.peak_load_mw = 4000;
    cfg.regime_weights = {0.3, 0.6, 0.1};
    auto g = generate_synthetic(cfg, 4);
    auto cost = prepare_cost_inputs(*g.bundle.units, g.bundle.history, 4);
    auto units = std::make_shared<UnitRegistry>(with_inferred_rocs(*g.bundle.units, cost.rocs));
    for (auto day : g.bundle.days) {
        day.units = units;
        apply_cost_model(day, cost);
        for (Design d : {Design::National, Design::Zonal, Design::Nodal}) {
            auto o = testkit::run_design(day, g.bundle.topology, d);
            auto L = settle(o, day, g.bundle.topology);
            for (std::size_t t = 0; t < 48; ++t) {
                double producers = 0.0;
                for (const auto& [u, rev] : L.wholesale_revenue) producers += rev[t];
                EXPECT_NEAR(L.consumer_wholesale_cost[t], producers + L.ic_trade[t] + L.congestion_rent_intra[t],
                            1e-3)
                    << day.date << " " << to_string(d) << " period " << t;
            }
        }
    }
}
