#include <gtest/gtest.h>

#include "testkit.hpp"
#include "zonalsim/calibration.hpp"
#include "zonalsim/redispatch.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;

namespace {

ClearingResult schedule(std::map<std::string, Series> dispatch) {
    ClearingResult r;
    r.periods = static_cast<int>(dispatch.begin()->second.size());
    r.dispatch = std::move(dispatch);
    return r;
}

BalancingOutcome volumes(double up, double down) {
    BalancingOutcome b;
    b.volume_up = up;
    b.volume_down = down;
    b.period_up = {up};
    b.period_down = {down};
    return b;
}

}  // namespace

TEST(Redispatch, TwoBusNationalToNodal) {
    auto inst = testkit::two_bus();
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    auto a = redispatch(n, inst.day, inst.topo, 1.0);
    EXPECT_NEAR(a.dispatch.at("gen-north")[0], 50.0, 1e-6);
    EXPECT_NEAR(a.dispatch.at("gen-south")[0], 70.0, 1e-6);
    auto b = balancing_volume(n, a, default_groups(inst.day, inst.topo));
    EXPECT_NEAR(b.volume_down, 25.0, 1e-6);
    EXPECT_NEAR(b.volume_up, 25.0, 1e-6);
    EXPECT_NEAR(b.congestion_volume(), 50.0, 1e-6);
    EXPECT_NEAR(b.unit_down.at("gen-north")[0], 25.0, 1e-6);
    EXPECT_NEAR(b.unit_up.at("gen-south")[0], 25.0, 1e-6);
}

TEST(Redispatch, FeasibleScheduleIsAFixedPoint) {
    auto inst = testkit::two_bus(4);
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    auto a = redispatch(z, inst.day, inst.topo, 1.0);
    auto b = balancing_volume(z, a, default_groups(inst.day, inst.topo));
    EXPECT_NEAR(b.congestion_volume(), 0.0, 1e-6);
    for (const auto& [u, q] : z.dispatch)
        for (std::size_t t = 0; t < q.size(); ++t) EXPECT_NEAR(a.dispatch.at(u)[t], q[t], 1e-6);
}

TEST(Redispatch, UncongestedDayUnchanged) {
    auto inst = testkit::two_bus(2, Capacity::unlimited());
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    auto a = redispatch(n, inst.day, inst.topo, 1.0);
    EXPECT_NEAR(a.dispatch.at("gen-north")[1], n.dispatch.at("gen-north")[1], 1e-6);
}

TEST(Redispatch, WarmStartedModelMatchesFreshSolve) {
    auto inst = testkit::two_bus(2);
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    RedispatchModel m(n, inst.day, inst.topo);
    for (double tau : {1.0, 0.4, 1.6, 0.7}) {
        auto warm = m.solve(tau);
        auto fresh = redispatch(n, inst.day, inst.topo, tau);
        EXPECT_NEAR(warm.dispatch.at("gen-north")[1], fresh.dispatch.at("gen-north")[1], 1e-6);
        EXPECT_NEAR(warm.dispatch.at("gen-north")[1], std::min(100.0, 50.0 * tau), 1e-6);
    }
}

TEST(Balancing, IdenticalResultsHaveNoVolume) {
    auto w = schedule({{"a", {10, 20}}, {"b", {5, 5}}});
    auto b = balancing_volume(w, w, {{"a", "g1"}, {"b", "g2"}});
    EXPECT_DOUBLE_EQ(b.congestion_volume(), 0.0);
}

TEST(Balancing, MovesInsideAGroupNet) {
    auto w = schedule({{"a", {50}}, {"b", {0}}, {"c", {10}}});
    auto n = schedule({{"a", {0}}, {"b", {50}}, {"c", {30}}});
    auto b = balancing_volume(w, n, {{"a", "gas/north"}, {"b", "gas/north"}, {"c", "gas/south"}});
    EXPECT_DOUBLE_EQ(b.group_up.at("gas/north")[0], 0.0);
    EXPECT_DOUBLE_EQ(b.group_down.at("gas/north")[0], 0.0);
    EXPECT_DOUBLE_EQ(b.volume_up, 10.0);
    EXPECT_DOUBLE_EQ(b.volume_down, 0.0);
}

TEST(Balancing, GroupMapMustPartitionGenerators) {
    auto w = schedule({{"a", {1}}, {"b", {1}}});
    EXPECT_THROW(balancing_volume(w, w, {{"a", "g"}}), std::invalid_argument);
    EXPECT_THROW(balancing_volume(w, w, {{"a", "g"}, {"b", "g"}, {"x", "g"}}), std::invalid_argument);
}

TEST(BalancingPrice, OfferStack) {
    ObservedBalancingRecord rec;
    rec.accepted_offers = {{150, 30}, {100, 20}};
    auto p = price_balancing(volumes(25, 0), rec);
    EXPECT_DOUBLE_EQ(p.cost_offers, 2750.0);
    EXPECT_DOUBLE_EQ(p.bm_cost, 2750.0);
    EXPECT_EQ(p.exhausted_warnings, 0);
}

TEST(BalancingPrice, NegativeBidReceipt) {
    ObservedBalancingRecord rec;
    rec.accepted_bids = {{-48, 50}};
    auto p = price_balancing(volumes(0, 10), rec);
    EXPECT_DOUBLE_EQ(p.receipt_bids, -480.0);
    EXPECT_DOUBLE_EQ(p.bm_cost, 480.0);
}

TEST(BalancingPrice, ZeroVolumesCostNothing) {
    ObservedBalancingRecord rec;
    rec.accepted_offers = {{100, 20}};
    auto p = price_balancing(volumes(0, 0), rec);
    EXPECT_DOUBLE_EQ(p.bm_cost, 0.0);
}

TEST(BalancingPrice, ExhaustedStackWarns) {
    ObservedBalancingRecord rec;
    rec.accepted_offers = {{100, 20}};
    auto p = price_balancing(volumes(30, 0), rec);
    EXPECT_EQ(p.exhausted_warnings, 1);
    EXPECT_DOUBLE_EQ(p.cost_offers, 3000.0);
}

TEST(Calibration, TwoBusTarget) {
    auto inst = testkit::two_bus();
    auto c = calibrate(inst.day, inst.topo, 50.0);
    EXPECT_TRUE(c.converged);
    EXPECT_LE(std::abs(c.achieved_volume - 50.0), 10.0);
    EXPECT_LE(c.iterations, 40);
    // volume(tau) = 100 - 50 tau below tau = 2
    EXPECT_NEAR(c.achieved_volume, 100.0 - 50.0 * c.tau, 1e-6);
}

TEST(Calibration, ZeroTargetOnUncongestedDay) {
    auto inst = testkit::two_bus(4, Capacity::unlimited());
    auto c = calibrate(inst.day, inst.topo, 0.0);
    EXPECT_TRUE(c.converged);
    EXPECT_DOUBLE_EQ(c.tau, 5.0);
    EXPECT_EQ(c.iterations, 1);
}

TEST(Calibration, UnreachableTarget) {
    auto inst = testkit::two_bus();
    auto c = calibrate(inst.day, inst.topo, 200.0);
    EXPECT_FALSE(c.converged);
    EXPECT_LE(c.iterations, 40);
}

// Property: a volume produced at a planted tau is recovered within tolerance.
TEST(CalibrationProperty, RecoversPlantedVolume) {
    SyntheticConfig cfg;
    cfg.buses = 36;
    cfg.units = 60;
    cfg.days = 3;
    cfg.peak_load_mw = 4000;
    cfg.regime_weights = {0.0, 1.0, 0.0};
    auto g = generate_synthetic(cfg, 9);
    const auto& topo = g.bundle.topology;
    const double planted[] = {0.6, 1.3, 2.2};
    for (std::size_t i = 0; i < g.bundle.days.size(); ++i) {
        auto day = g.bundle.days[i];
        auto cost = prepare_cost_inputs(*g.bundle.units, g.bundle.history, 1);
        auto units = std::make_shared<UnitRegistry>(with_inferred_rocs(*g.bundle.units, cost.rocs));
        day.units = units;
        apply_cost_model(day, cost);
        auto n = clear(day, topo, Design::National, 1.0);
        auto a = redispatch(n, day, topo, planted[i]);
        const double target = balancing_volume(n, a, default_groups(day, topo)).congestion_volume();
        auto c = calibrate(day, topo, target, {}, &n);
        EXPECT_TRUE(c.converged) << day.date;
        EXPECT_LE(std::abs(c.achieved_volume - target), std::max(10.0, 0.02 * target)) << day.date;
        EXPECT_LE(c.iterations, 40);
    }
}
